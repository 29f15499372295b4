#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prefvec/core_math.hpp"

namespace prefvec {

struct LearningConfig {
  double eta_long = 0.01;
  double eta_short = 0.05;
  double decay = 0.1;  // lambda
  double baseline_alpha = 0.05;
  double beta_long = 2.0;
  double beta_short = 5.0;
  double temperature = 1.0;  // shared with retrieval

  void validate() const;
};

struct NormSnapshot {
  int session = 0;
  double norm = 0.0;
  bool operator==(const NormSnapshot&) const = default;
};

/// Dual user vectors plus the reward baseline.
///
/// z_long accumulates every increment and is never reset. z_short decays
/// geometrically within a session and is zeroed at session boundaries.
struct UserState {
  std::string user_id;
  Vector z_long;
  Vector z_short;
  double baseline = 0.0;
  int sessions_completed = 0;
  std::vector<NormSnapshot> norm_history;

  /// Zero vectors of width k and a (0, 0.0) norm snapshot.
  static UserState fresh(std::string user_id, std::size_t k);

  bool operator==(const UserState&) const = default;
};

/// beta_long * z_long + beta_short * z_short
Vector effective_vector(const UserState& state, const LearningConfig& cfg);

struct UpdateReport {
  bool applied = false;
  Vector delta_long;
  Vector delta_short;
  Vector v_chosen;
  Vector mu;
};

/// REINFORCE step on the fixed candidate set:
///   d = (A / tau) * (mean_{chosen} v - sum_i p_i v_i)
///   z_long += eta_long * d
///   z_short = (1 - lambda) * z_short + eta_short * d
/// An empty chosen set is a skipped update: nothing changes, not even decay.
UpdateReport reinforce_update(UserState& state, const LearningConfig& cfg,
                              std::span<const std::string> candidate_ids,
                              std::span<const Vector> item_vecs, std::span<const double> probs,
                              std::span<const std::string> chosen_ids, double advantage);

/// The recursion alone: z_long += dl; z_short = (1 - decay) z_short + ds.
void apply_increments(UserState& state, double decay, std::span<const double> delta_long,
                      std::span<const double> delta_short);

/// b <- (1 - alpha) b + alpha r. Requires r in [-1, 1].
double update_baseline(UserState& state, const LearningConfig& cfg, double r_hat);

/// Ends a session: z_short <- 0 and the current ||z_long|| is recorded.
void session_reset(UserState& state);

}  // namespace prefvec
