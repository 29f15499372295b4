#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/directives.hpp"

namespace prefvec {

struct StylePrefs {
  bool require_short = false;
  std::size_t max_chars = 1000;
  bool require_bullets = false;
  Lang lang = Lang::En;

  bool operator==(const StylePrefs&) const = default;
};

struct Persona {
  std::string id;
  StylePrefs prefs;

  /// Canonical identifiers of the revealed preferences, e.g.
  /// {"short", "bullets", "en"}; used for Jaccard overlap.
  std::vector<std::string> preference_ids() const;
};

/// A_short_bullets_en .. E_long_no_bullets_zh plus F_long_bullets_zh.
const std::vector<Persona>& builtin_personas();

/// Accepts the single-letter key ("A") or the full id.
const Persona& persona_by_key(std::string_view key);

enum class Phase { Reveal, Retention, Mixed };
std::string_view to_string(Phase phase);

/// Style dimensions a persona states and the simulator restates.
enum class StyleDim { Length, Bullets, Language };

struct ScriptTurn {
  std::string text;       // full user utterance
  std::string task_tag;   // key into the task pool
  std::string task_text;  // the task part alone
  bool states_preference = false;
};

struct SessionScript {
  Phase phase = Phase::Reveal;
  std::vector<ScriptTurn> turns;
  bool complaint_enabled = false;
};

struct ScriptConfig {
  std::size_t turns_per_session = 4;
  double restate_prob = 0.3;  // mixed sessions: chance a turn restates a preference
  double ack_prob = 0.5;      // chance of a positive acknowledgment after a compliant turn
  double noise_rate = 0.0;    // chance of a spurious complaint after a compliant turn

  void validate() const;
};

/// "Please keep answers short, under 200 characters." and friends: the
/// session-1 statement of one style dimension.
std::string reveal_statement(const StylePrefs& prefs, StyleDim dim);

/// "When answering questions like this, <directive>." used by restating and
/// complaining users.
std::string restatement(const StylePrefs& prefs, StyleDim dim);

/// Session 1 reveals every preference, session 2 only issues tasks, later
/// sessions are mixed (occasional restatements, complaints enabled).
/// Requires total_sessions >= 3 and 1 <= session_index <= total_sessions.
SessionScript generate_session_script(const Persona& persona, int session_index, int total_sessions,
                                      std::uint64_t seed, const ScriptConfig& cfg = {});

/// Templated stand-in for the chat model. Style is driven only by the
/// injected notes; without directives the answer is long, unbulleted and in
/// `lang_default`.
std::string agent_respond(std::string_view query, std::span<const std::string> notes,
                          Lang lang_default = Lang::En);

enum class Violation { TooLong, NoBullets, WrongLang };
std::string_view to_string(Violation v);
Violation violation_from_string(std::string_view s);

struct Judgement {
  double satisfaction = 1.0;
  std::vector<Violation> violations;
};

/// satisfaction = max(0, 1 - 0.25 * |violations|)
Judgement judge_turn(std::string_view response, const StylePrefs& prefs);

std::size_t codepoint_count(std::string_view s);
bool has_cjk(std::string_view s);

struct FollowUp {
  std::string text;        // empty when there is no follow-up at all
  bool generated = false;  // complaint or acknowledgment, not the next scripted task
  bool complaint = false;
};

/// Deterministic coin in [0, 1) keyed by run seed and turn position.
double turn_coin(std::uint64_t seed, std::string_view persona_id, int session_index,
                 std::size_t turn_index, std::string_view purpose);

/// Simulated user reaction to a judged turn.
FollowUp user_followup(const SessionScript& script, std::size_t turn_index, const Judgement& judgement,
                       const Persona& persona, int session_index, std::uint64_t seed,
                       const ScriptConfig& cfg = {});

}  // namespace prefvec
