#include "prefvec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "prefvec/errors.hpp"
#include "prefvec/hashing.hpp"

namespace prefvec {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ParseError("config key " + std::string(key) + ": not a number: '" + v + "'");
  return out;
}

std::uint64_t to_uint(std::string_view key, const std::string& v) {
  std::uint64_t out = 0;
  int base = 10;
  std::string_view digits = v;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    base = 16;
    digits.remove_prefix(2);
  }
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
  if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size())
    throw ParseError("config key " + std::string(key) + ": not a non-negative integer: '" + v + "'");
  return out;
}

bool to_bool(std::string_view key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("config key " + std::string(key) + ": not a boolean: '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view key, const std::string&)> set;
};


Field real_field(std::function<double&(RunConfig&)> ref) {
  return {[ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view k, const std::string& v) { ref(c) = to_double(k, v); }};
}

Field size_field(std::function<std::size_t&(RunConfig&)> ref) {
  return {[ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view k, const std::string& v) {
            ref(c) = static_cast<std::size_t>(to_uint(k, v));
          }};
}

Field list_field(std::function<std::vector<std::string>&(RunConfig&)> ref) {
  return {[ref](const RunConfig& c) { return join(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view, const std::string& v) { ref(c) = to_list(v); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    t["run.seed"] = {[](const RunConfig& c) { return std::to_string(c.seed); },
                     [](RunConfig& c, std::string_view k, const std::string& v) { c.seed = to_uint(k, v); }};
    t["run.sessions"] = {[](const RunConfig& c) { return std::to_string(c.sessions); },
                         [](RunConfig& c, std::string_view k, const std::string& v) {
                           c.sessions = static_cast<int>(to_uint(k, v));
                         }};
    t["run.modes"] = {[](const RunConfig& c) {
                        std::vector<std::string> names;
                        for (auto m : c.modes) names.emplace_back(to_string(m));
                        return join(names);
                      },
                      [](RunConfig& c, std::string_view, const std::string& v) {
                        c.modes.clear();
                        for (const auto& name : to_list(v)) {
                          if (name == "all") {
                            c.modes = {SystemMode::Vanilla, SystemMode::StaticMem, SystemMode::OnlineUser};
                            break;
                          }
                          c.modes.push_back(mode_from_string(name));
                        }
                      }};
    t["run.personas"] = list_field([](RunConfig& c) -> auto& { return c.personas; });
    t["run.shared_store"] = {[](const RunConfig& c) { return std::string(c.shared_store ? "true" : "false"); },
                             [](RunConfig& c, std::string_view k, const std::string& v) {
                               c.shared_store = to_bool(k, v);
                             }};

    t["embedder.dim"] = size_field([](RunConfig& c) -> auto& { return c.pipeline.embedder.dim; });
    t["embedder.hash_seed"] = {
        [](const RunConfig& c) { return std::to_string(c.pipeline.embedder.hash_seed); },
        [](RunConfig& c, std::string_view k, const std::string& v) { c.pipeline.embedder.hash_seed = to_uint(k, v); }};

    t["memory.item_dim"] = size_field([](RunConfig& c) -> auto& { return c.pipeline.memory.item_dim; });
    t["memory.warmup_threshold"] =
        size_field([](RunConfig& c) -> auto& { return c.pipeline.memory.warmup_threshold; });
    t["memory.global_cap"] = size_field([](RunConfig& c) -> auto& { return c.pipeline.memory.global_cap; });

    t["retrieval.dense_topk"] = size_field([](RunConfig& c) -> auto& { return c.pipeline.retrieval.dense_topk; });
    t["retrieval.rerank_topj"] = size_field([](RunConfig& c) -> auto& { return c.pipeline.retrieval.rerank_topj; });
    // One temperature drives both the scoring softmax and the update.
    t["retrieval.temperature"] = {
        [](const RunConfig& c) { return format_double(c.pipeline.retrieval.temperature); },
        [](RunConfig& c, std::string_view k, const std::string& v) {
          c.pipeline.retrieval.temperature = c.pipeline.learning.temperature = to_double(k, v);
        }};
    t["reranker.kappa"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reranker_kappa; });

    t["learning.eta_long"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.eta_long; });
    t["learning.eta_short"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.eta_short; });
    t["learning.decay"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.decay; });
    t["learning.baseline_alpha"] =
        real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.baseline_alpha; });
    t["learning.beta_long"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.beta_long; });
    t["learning.beta_short"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.learning.beta_short; });

    t["reward.negative_keywords"] =
        list_field([](RunConfig& c) -> auto& { return c.pipeline.reward.negative_keywords; });
    t["reward.positive_keywords"] =
        list_field([](RunConfig& c) -> auto& { return c.pipeline.reward.positive_keywords; });
    t["reward.negative_value"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.negative_value; });
    t["reward.positive_increment"] =
        real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.positive_increment; });
    t["reward.positive_cap"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.positive_cap; });
    t["reward.dampen_threshold"] =
        real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.dampen_threshold; });
    t["reward.dampen_factor"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.dampen_factor; });
    t["reward.clip_low"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.clip_low; });
    t["reward.clip_high"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.reward.clip_high; });

    t["gate.low_sim"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.low_sim; });
    t["gate.high_sim_neg"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.high_sim_neg; });
    t["gate.pos_sim"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.pos_sim; });
    t["gate.strong_neg"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.strong_neg; });
    t["gate.strong_pos"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.strong_pos; });
    t["gate.g_retrieval_failure"] =
        real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.g_retrieval_failure; });
    t["gate.g_llm_failure"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.g_llm_failure; });
    t["gate.g_pos_helped"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.g_pos_helped; });
    t["gate.g_pos_nohelp"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.g_pos_nohelp; });
    t["gate.g_default"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.gate.g_default; });
    t["gate.fixed"] = {[](const RunConfig& c) {
                         return c.pipeline.gate.fixed ? format_double(*c.pipeline.gate.fixed) : std::string("none");
                       },
                       [](RunConfig& c, std::string_view k, const std::string& v) {
                         if (v == "none" || v.empty())
                           c.pipeline.gate.fixed.reset();
                         else
                           c.pipeline.gate.fixed = to_double(k, v);
                       }};

    t["simulator.turns_per_session"] =
        size_field([](RunConfig& c) -> auto& { return c.pipeline.script.turns_per_session; });
    t["simulator.restate_prob"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.script.restate_prob; });
    t["simulator.ack_prob"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.script.ack_prob; });
    t["simulator.noise_rate"] = real_field([](RunConfig& c) -> auto& { return c.pipeline.script.noise_rate; });
    return t;
  }();
  return table;
}

}  // namespace

KeyValues parse_config_text(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": key must be 'section.name'");
    if (!kv.emplace(key, value).second)
      throw ParseError("config line " + std::to_string(line_no) + ": duplicate key " + key);
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_config(RunConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "run.out") {
      cfg.out_dir = value;
      continue;
    }
    const auto it = fields().find(key);
    if (it == fields().end()) throw ParseError("unknown config key: " + key);
    it->second.set(cfg, key, value);
  }
  cfg.pipeline.validate();
  if (cfg.sessions < 2) throw ContractViolation("run.sessions must be at least 2");
  if (cfg.modes.empty()) throw ContractViolation("run.modes must name at least one mode");
  if (cfg.personas.empty()) throw ContractViolation("run.personas must name at least one persona");
  for (const auto& p : cfg.personas) persona_by_key(p);
}

KeyValues env_overrides(const char* const* envp) {
  KeyValues kv;
  if (!envp) return kv;
  constexpr std::string_view prefix = "PREFVEC_";
  for (; *envp; ++envp) {
    const std::string_view entry(*envp);
    if (!entry.starts_with(prefix)) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    std::string name(entry.substr(prefix.size(), eq - prefix.size()));
    const auto sep = name.find("__");
    if (sep == std::string::npos) continue;
    std::string key = name.substr(0, sep) + "." + name.substr(sep + 2);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    kv[key] = std::string(entry.substr(eq + 1));
  }
  return kv;
}

KeyValues to_key_values(const RunConfig& cfg) {
  KeyValues kv;
  for (const auto& [key, field] : fields()) kv[key] = field.get(cfg);
  return kv;
}

std::string canonical_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : to_key_values(cfg)) out += key + " = " + value + "\n";
  return out;
}

std::string fingerprint(const RunConfig& cfg) { return sha1_hex(canonical_text(cfg)).substr(0, 16); }

}  // namespace prefvec
