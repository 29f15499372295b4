#include "prefvec/reward.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void RewardConfig::validate() const {
  if (!in_unit(dampen_threshold)) throw ContractViolation("RewardConfig: dampen_threshold must lie in [0, 1]");
  if (!(dampen_factor > 0.0 && dampen_factor <= 1.0))
    throw ContractViolation("RewardConfig: dampen_factor must lie in (0, 1]");
  if (!(clip_low <= clip_high)) throw ContractViolation("RewardConfig: clip_low > clip_high");
}

void GateConfig::validate() const {
  for (double g : {g_retrieval_failure, g_llm_failure, g_pos_helped, g_pos_nohelp, g_default}) {
    if (!in_unit(g)) throw ContractViolation("GateConfig: gate values must lie in [0, 1]");
  }
  if (fixed && !in_unit(*fixed)) throw ContractViolation("GateConfig: fixed gate must lie in [0, 1]");
}

bool contains_keyword(std::string_view text, std::string_view keyword) {
  if (keyword.empty()) return false;
  const std::string hay = lower(text);
  const std::string needle = lower(keyword);
  for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !word_char(hay[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !word_char(hay[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

double estimate_reward(std::string_view query, std::string_view followup, const Embedder& embedder,
                       const RewardConfig& cfg) {
  double r = 0.0;
  const bool negative = std::any_of(cfg.negative_keywords.begin(), cfg.negative_keywords.end(),
                                    [&](const std::string& k) { return contains_keyword(followup, k); });
  if (negative) {
    r = cfg.negative_value;
  } else {
    std::set<std::string> hits;
    for (const auto& k : cfg.positive_keywords) {
      if (contains_keyword(followup, k)) hits.insert(lower(k));
    }
    r = std::min(cfg.positive_cap, cfg.positive_increment * static_cast<double>(hits.size()));
  }
  if (r != 0.0 && cosine(embedder.embed(query), embedder.embed(followup)) < cfg.dampen_threshold) {
    r *= cfg.dampen_factor;
  }
  return std::clamp(r, cfg.clip_low, cfg.clip_high);
}

double compute_gate(double r_hat, double sq_max, const GateConfig& cfg) {
  if (cfg.fixed) return *cfg.fixed;
  if (r_hat < cfg.strong_neg) {
    if (sq_max < cfg.low_sim) return cfg.g_retrieval_failure;
    if (sq_max > cfg.high_sim_neg) return cfg.g_llm_failure;
    return cfg.g_default;
  }
  if (r_hat > cfg.strong_pos) return sq_max > cfg.pos_sim ? cfg.g_pos_helped : cfg.g_pos_nohelp;
  return cfg.g_default;
}

double advantage(double r_hat, double gate, double baseline) { return gate * (r_hat - baseline); }

}  // namespace prefvec
