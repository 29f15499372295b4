#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/embedding.hpp"
#include "prefvec/memory.hpp"
#include "prefvec/persona.hpp"
#include "prefvec/retrieval.hpp"
#include "prefvec/reward.hpp"
#include "prefvec/user_state.hpp"

namespace prefvec {

enum class SystemMode { Vanilla, StaticMem, OnlineUser };

std::string_view to_string(SystemMode mode);
SystemMode mode_from_string(std::string_view s);

/// Every tunable of the closed loop. Defaults are the reference values.
struct PipelineConfig {
  EmbedderConfig embedder;
  MemoryStoreConfig memory;
  RetrievalConfig retrieval;
  LearningConfig learning;
  RewardConfig reward;
  GateConfig gate;
  ScriptConfig script;
  double reranker_kappa = 4.0;

  /// Validates each part; retrieval and learning must share one temperature.
  void validate() const;
};

/// One scripted user turn and everything the loop did with it.
struct TurnRecord {
  std::string user_id;
  std::string mode;
  int session_index = 0;
  int turn_index = 0;
  Phase phase = Phase::Reveal;
  std::string query;
  std::string task_tag;
  bool states_preference = false;
  std::vector<std::string> new_card_ids;

  std::vector<std::string> global_ids;
  RetrievalTrace retrieval;
  std::vector<std::string> injected_ids;  // global ids then selected ids
  std::vector<std::string> injected_notes;

  std::string response;
  double satisfaction = 0.0;
  std::vector<Violation> violations;

  std::string followup;  // empty: no follow-up (last turn)
  bool followup_generated = false;
  bool complaint = false;
  std::vector<std::string> followup_card_ids;

  std::optional<double> reward;
  std::optional<double> gate;
  std::optional<double> advantage;
  double baseline_before = 0.0;
  bool update_applied = false;
  double z_long_norm = 0.0;  // after this turn
};

struct UserRun {
  Persona persona;
  UserState state;
  std::vector<TurnRecord> records;
  Vector z_short_last;  // short-term vector just before the latest session reset
};

/// Several simulated users sharing one memory store (and therefore one item
/// space). Sessions are interleaved: session s of every user runs before
/// session s + 1 of any user.
struct PopulationRun {
  SystemMode mode = SystemMode::OnlineUser;
  std::uint64_t seed = 0;
  int sessions = 0;
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<MemoryStore> store;
  std::vector<UserRun> users;
};

/// Requires n_sessions >= 2 and at least one persona.
PopulationRun run_population(SystemMode mode, std::span<const Persona> personas, int n_sessions,
                             std::uint64_t seed, const PipelineConfig& cfg = {});

/// A single user with a private store.
std::vector<TurnRecord> run_episode(SystemMode mode, const Persona& persona, int n_sessions,
                                    std::uint64_t seed, const PipelineConfig& cfg = {});

/// card id -> preference kinds encoded by the card's action text.
std::map<std::string, std::vector<PrefKind>> card_kind_map(const MemoryStore& store);

}  // namespace prefvec
