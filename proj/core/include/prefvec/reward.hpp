#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/embedding.hpp"

namespace prefvec {

struct RewardConfig {
  std::vector<std::string> negative_keywords{"incorrect", "redo",         "wrong",
                                             "not right", "doesn't work", "no"};
  std::vector<std::string> positive_keywords{"thanks", "continue", "great", "helpful", "perfect"};
  double negative_value = -1.0;
  double positive_increment = 0.5;
  double positive_cap = 1.0;
  double dampen_threshold = 0.2;
  double dampen_factor = 0.3;
  double clip_low = -1.0;
  double clip_high = 1.0;

  void validate() const;
};

struct GateConfig {
  double low_sim = 0.2;
  double high_sim_neg = 0.5;
  double pos_sim = 0.4;
  double strong_neg = -0.5;
  double strong_pos = 0.5;
  double g_retrieval_failure = 0.9;
  double g_llm_failure = 0.2;
  double g_pos_helped = 0.6;
  double g_pos_nohelp = 0.3;
  double g_default = 0.5;
  /// When set, every turn uses this gate (ablation of the attribution rules).
  std::optional<double> fixed;

  void validate() const;
};

/// Whole-phrase, case-insensitive occurrence of `keyword` in `text`.
bool contains_keyword(std::string_view text, std::string_view keyword);

/// Weak reward from the follow-up utterance: -1 on any negative keyword,
/// otherwise +increment per distinct positive keyword up to the cap, else 0;
/// damped when the follow-up drifts off the query's topic; clipped.
double estimate_reward(std::string_view query, std::string_view followup, const Embedder& embedder,
                       const RewardConfig& cfg = {});

/// Retrieval-attribution gate from the reward and the best query/memory
/// similarity among the retrieved candidates.
double compute_gate(double r_hat, double sq_max, const GateConfig& cfg = {});

/// g * (r_hat - baseline)
double advantage(double r_hat, double gate, double baseline);

}  // namespace prefvec
