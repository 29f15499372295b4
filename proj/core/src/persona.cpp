#include "prefvec/persona.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>

#include "prefvec/errors.hpp"
#include "task_pool.hpp"

namespace prefvec {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_from(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

std::string_view directive_phrase(const StylePrefs& p, StyleDim dim, std::string& buffer) {
  switch (dim) {
    case StyleDim::Length:
      if (p.require_short) {
        buffer = "keep answers short, under " + std::to_string(p.max_chars) + " characters";
        return buffer;
      }
      return "give long, detailed answers";
    case StyleDim::Bullets:
      return p.require_bullets ? "use bullet points" : "avoid bullet points and write in paragraphs";
    case StyleDim::Language:
      return p.lang == Lang::Zh ? "answer in Chinese" : "answer in English";
  }
  return {};
}

constexpr std::array<StyleDim, 3> kDims = {StyleDim::Length, StyleDim::Bullets, StyleDim::Language};

StyleDim dim_of(Violation v) {
  switch (v) {
    case Violation::TooLong: return StyleDim::Length;
    case Violation::NoBullets: return StyleDim::Bullets;
    case Violation::WrongLang: return StyleDim::Language;
  }
  return StyleDim::Length;
}

std::string truncate_codepoints(std::string_view s, std::size_t limit) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size() && count < limit) {
    const auto c = static_cast<unsigned char>(s[i]);
    i += c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    ++count;
  }
  return std::string(s.substr(0, std::min(i, s.size())));
}

std::string render(const detail::LocalizedTask& t, Lang lang, bool bullets, bool brief) {
  const bool zh = lang == Lang::Zh;
  std::ostringstream out;
  if (brief) {
    if (bullets) {
      for (std::size_t i = 0; i < t.items.size(); ++i) out << (i ? "\n" : "") << "- " << t.items[i];
    } else if (zh) {
      out << t.items[0] << "、" << t.items[1] << "和" << t.items[2] << "。";
    } else {
      out << t.items[0] << ", " << t.items[1] << ", and " << t.items[2] << ".";
    }
    return out.str();
  }
  out << t.intro << "\n";
  for (std::size_t i = 0; i < t.items.size(); ++i) {
    if (bullets) {
      out << "- " << t.items[i] << (zh ? "：" : ": ") << t.details[i] << (zh ? "。" : ".") << "\n";
    } else {
      out << t.items[i] << (zh ? "：" : ": ") << t.details[i] << (zh ? "。" : ". ");
    }
  }
  if (!bullets) out << "\n";
  out << t.closing;
  return out.str();
}

std::string fit_to(std::string text, std::size_t limit, bool bullets) {
  if (codepoint_count(text) <= limit) return text;
  if (bullets) {
    // drop whole trailing lines first so the bullet layout survives
    while (codepoint_count(text) > limit) {
      const auto pos = text.rfind('\n');
      if (pos == std::string::npos) break;
      text.erase(pos);
    }
    if (codepoint_count(text) <= limit) return text;
  }
  return truncate_codepoints(text, limit);
}

}  // namespace

std::vector<std::string> Persona::preference_ids() const {
  return {prefs.require_short ? "short" : "long", prefs.require_bullets ? "bullets" : "no_bullets",
          std::string(to_string(prefs.lang))};
}

const std::vector<Persona>& builtin_personas() {
  static const std::vector<Persona> personas = {
      {"A_short_bullets_en", {true, 200, true, Lang::En}},
      {"B_short_no_bullets_en", {true, 200, false, Lang::En}},
      {"C_long_bullets_en", {false, 1000, true, Lang::En}},
      {"D_short_bullets_zh", {true, 200, true, Lang::Zh}},
      {"E_long_no_bullets_zh", {false, 1000, false, Lang::Zh}},
      {"F_long_bullets_zh", {false, 1000, true, Lang::Zh}},
  };
  return personas;
}

const Persona& persona_by_key(std::string_view key) {
  for (const auto& p : builtin_personas()) {
    if (p.id == key || (key.size() == 1 && p.id.front() == key.front())) return p;
  }
  throw ParseError("unknown persona: " + std::string(key));
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Reveal: return "reveal";
    case Phase::Retention: return "retention";
    case Phase::Mixed: return "mixed";
  }
  return "?";
}

void ScriptConfig::validate() const {
  if (turns_per_session < 1) throw ContractViolation("ScriptConfig: turns_per_session must be >= 1");
  for (double p : {restate_prob, ack_prob, noise_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("ScriptConfig: probabilities must lie in [0, 1]");
  }
}

std::string reveal_statement(const StylePrefs& prefs, StyleDim dim) {
  switch (dim) {
    case StyleDim::Length:
      return prefs.require_short
                 ? "Please keep answers short, under " + std::to_string(prefs.max_chars) + " characters."
                 : std::string("In general, give long, detailed answers.");
    case StyleDim::Bullets:
      return prefs.require_bullets
                 ? std::string("When answering list questions, use bullet points.")
                 : std::string("When answering list questions, avoid bullet points and write in paragraphs.");
    case StyleDim::Language:
      return prefs.lang == Lang::Zh ? "Always answer in Chinese." : "Always answer in English.";
  }
  return {};
}

std::string restatement(const StylePrefs& prefs, StyleDim dim) {
  std::string buffer;
  return "When answering questions like this, " + std::string(directive_phrase(prefs, dim, buffer)) + ".";
}

SessionScript generate_session_script(const Persona& persona, int session_index, int total_sessions,
                                      std::uint64_t seed, const ScriptConfig& cfg) {
  cfg.validate();
  if (total_sessions < 3) throw ContractViolation("generate_session_script: need at least 3 sessions");
  if (session_index < 1 || session_index > total_sessions)
    throw ContractViolation("generate_session_script: session index out of range");

  SessionScript script;
  script.phase = session_index == 1 ? Phase::Reveal : session_index == 2 ? Phase::Retention : Phase::Mixed;
  script.complaint_enabled = script.phase == Phase::Mixed;

  std::mt19937_64 rng(mix(seed ^ mix(fnv1a(persona.id) + static_cast<std::uint64_t>(session_index))));
  const auto& pool = detail::task_pool();
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  std::size_t n = cfg.turns_per_session;
  if (script.phase == Phase::Reveal) n = std::max(n, kDims.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& task = pool[order[i % order.size()]];
    ScriptTurn turn;
    turn.task_tag = std::string(task.tag);
    turn.task_text = std::string(task.in(persona.prefs.lang).prompt);
    turn.text = turn.task_text;
    if (script.phase == Phase::Reveal && i < kDims.size()) {
      turn.text = reveal_statement(persona.prefs, kDims[i]) + " " + turn.task_text;
      turn.states_preference = true;
    } else if (script.phase == Phase::Mixed) {
      const double u = unit_from(rng());
      const StyleDim dim = kDims[rng() % kDims.size()];
      if (u < cfg.restate_prob) {
        turn.text = restatement(persona.prefs, dim) + " " + turn.task_text;
        turn.states_preference = true;
      }
    }
    script.turns.push_back(std::move(turn));
  }
  return script;
}

std::string agent_respond(std::string_view query, std::span<const std::string> notes, Lang lang_default) {
  const Directives d = parse_directives(notes);
  const Lang lang = d.lang.value_or(lang_default);
  const auto* task = detail::find_task(query);
  if (!task) return lang == Lang::Zh ? "好的，我可以帮你处理这个问题。" : "Sure, I can help with that.";

  const bool bullets = d.bullets.value_or(false);
  const std::size_t limit = d.max_chars ? *d.max_chars : d.short_requested ? 200 : 1000;
  return fit_to(render(task->in(lang), lang, bullets, d.short_requested), limit, bullets);
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::TooLong: return "too_long";
    case Violation::NoBullets: return "no_bullets";
    case Violation::WrongLang: return "wrong_lang";
  }
  return "?";
}

Violation violation_from_string(std::string_view s) {
  if (s == "too_long") return Violation::TooLong;
  if (s == "no_bullets") return Violation::NoBullets;
  if (s == "wrong_lang") return Violation::WrongLang;
  throw ParseError("unknown violation: " + std::string(s));
}

std::size_t codepoint_count(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool has_cjk(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c >= 0xE0 && c < 0xF0 && i + 2 < s.size()) {
      const char32_t cp = ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6) |
                          (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
      if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF)) return true;
      i += 3;
    } else {
      i += c >= 0xF0 ? 4 : c >= 0xC0 ? 2 : 1;
    }
  }
  return false;
}

Judgement judge_turn(std::string_view response, const StylePrefs& prefs) {
  Judgement j;
  if (prefs.require_short && codepoint_count(response) > prefs.max_chars) j.violations.push_back(Violation::TooLong);
  if (prefs.require_bullets) {
    bool any = false;
    std::istringstream lines{std::string(response)};
    for (std::string line; std::getline(lines, line);) {
      const auto b = line.find_first_not_of(' ');
      if (b == std::string::npos) continue;
      const std::string_view rest = std::string_view(line).substr(b);
      if (rest.starts_with("- ") || rest.starts_with("* ") || rest.starts_with("• ")) {
        any = true;
        break;
      }
    }
    if (!any) j.violations.push_back(Violation::NoBullets);
  }
  if (has_cjk(response) != (prefs.lang == Lang::Zh)) j.violations.push_back(Violation::WrongLang);
  j.satisfaction = std::max(0.0, 1.0 - 0.25 * static_cast<double>(j.violations.size()));
  return j;
}

double turn_coin(std::uint64_t seed, std::string_view persona_id, int session_index, std::size_t turn_index,
                 std::string_view purpose) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ fnv1a(persona_id));
  h = mix(h ^ static_cast<std::uint64_t>(session_index));
  h = mix(h ^ static_cast<std::uint64_t>(turn_index));
  h = mix(h ^ fnv1a(purpose));
  return unit_from(h);
}

FollowUp user_followup(const SessionScript& script, std::size_t turn_index, const Judgement& judgement,
                       const Persona& persona, int session_index, std::uint64_t seed, const ScriptConfig& cfg) {
  if (turn_index >= script.turns.size()) throw ContractViolation("user_followup: turn index out of range");
  const ScriptTurn& turn = script.turns[turn_index];

  if (script.phase == Phase::Mixed) {
    if (!judgement.violations.empty() && script.complaint_enabled) {
      std::string text = "That is incorrect, please redo it: " + turn.task_text;
      for (Violation v : judgement.violations) text += " " + restatement(persona.prefs, dim_of(v));
      return {std::move(text), true, true};
    }
    if (judgement.violations.empty()) {
      if (turn_coin(seed, persona.id, session_index, turn_index, "noise") < cfg.noise_rate) {
        return {"That is wrong, please redo it: " + turn.task_text, true, true};
      }
      if (turn_coin(seed, persona.id, session_index, turn_index, "ack") < cfg.ack_prob) {
        return {"Thanks, that helps. Please continue.", true, false};
      }
    }
  }
  if (turn_index + 1 < script.turns.size()) return {script.turns[turn_index + 1].text, false, false};
  return {};
}

}  // namespace prefvec
