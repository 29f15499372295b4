#include "prefvec/user_state.hpp"

#include <algorithm>
#include <cmath>

#include "prefvec/errors.hpp"

namespace prefvec {

void LearningConfig::validate() const {
  if (!(eta_long > 0.0) || !(eta_short > 0.0))
    throw ContractViolation("LearningConfig: learning rates must be > 0");
  if (!(decay > 0.0 && decay < 1.0)) throw ContractViolation("LearningConfig: decay must lie in (0, 1)");
  if (!(baseline_alpha > 0.0 && baseline_alpha <= 1.0))
    throw ContractViolation("LearningConfig: baseline_alpha must lie in (0, 1]");
  if (!(beta_long >= 0.0) || !(beta_short >= 0.0))
    throw ContractViolation("LearningConfig: beta weights must be >= 0");
  if (!(temperature > 0.0)) throw ContractViolation("LearningConfig: temperature must be > 0");
}

UserState UserState::fresh(std::string user_id, std::size_t k) {
  UserState s;
  s.user_id = std::move(user_id);
  s.z_long.assign(k, 0.0);
  s.z_short.assign(k, 0.0);
  s.norm_history.push_back({0, 0.0});
  return s;
}

Vector effective_vector(const UserState& state, const LearningConfig& cfg) {
  Vector z = scaled(state.z_long, cfg.beta_long);
  axpy(cfg.beta_short, state.z_short, z);
  return z;
}

void apply_increments(UserState& state, double decay, std::span<const double> delta_long,
                      std::span<const double> delta_short) {
  axpy(1.0, delta_long, state.z_long);
  for (std::size_t i = 0; i < state.z_short.size(); ++i) {
    state.z_short[i] = (1.0 - decay) * state.z_short[i] + delta_short[i];
  }
}

UpdateReport reinforce_update(UserState& state, const LearningConfig& cfg,
                              std::span<const std::string> candidate_ids,
                              std::span<const Vector> item_vecs, std::span<const double> probs,
                              std::span<const std::string> chosen_ids, double advantage) {
  UpdateReport report;
  if (chosen_ids.empty()) return report;

  if (candidate_ids.size() != item_vecs.size() || candidate_ids.size() != probs.size())
    throw ContractViolation("reinforce_update: candidate arrays differ in length");
  const std::size_t k = state.z_long.size();
  double psum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (item_vecs[i].size() != k)
      throw ContractViolation("reinforce_update: item vector and user vector differ in dimension");
    psum += probs[i];
  }
  if (std::abs(psum - 1.0) > 1e-6) throw ContractViolation("reinforce_update: probabilities must sum to 1");
  if (!std::isfinite(advantage)) throw ContractViolation("reinforce_update: non-finite advantage");

  report.v_chosen.assign(k, 0.0);
  for (const auto& id : chosen_ids) {
    auto it = std::find(candidate_ids.begin(), candidate_ids.end(), id);
    if (it == candidate_ids.end())
      throw ContractViolation("reinforce_update: chosen id " + id + " is not a candidate");
    axpy(1.0, item_vecs[static_cast<std::size_t>(it - candidate_ids.begin())], report.v_chosen);
  }
  for (double& x : report.v_chosen) x /= static_cast<double>(chosen_ids.size());

  report.mu.assign(k, 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) axpy(probs[i], item_vecs[i], report.mu);

  const Vector direction = sub(report.v_chosen, report.mu);
  const double step = advantage / cfg.temperature;
  report.delta_long = scaled(direction, cfg.eta_long * step);
  report.delta_short = scaled(direction, cfg.eta_short * step);

  apply_increments(state, cfg.decay, report.delta_long, report.delta_short);
  report.applied = true;
  return report;
}

double update_baseline(UserState& state, const LearningConfig& cfg, double r_hat) {
  if (!(r_hat >= -1.0 && r_hat <= 1.0)) throw ContractViolation("update_baseline: reward outside [-1, 1]");
  state.baseline = (1.0 - cfg.baseline_alpha) * state.baseline + cfg.baseline_alpha * r_hat;
  return state.baseline;
}

void session_reset(UserState& state) {
  std::fill(state.z_short.begin(), state.z_short.end(), 0.0);
  ++state.sessions_completed;
  state.norm_history.push_back({state.sessions_completed, norm2(state.z_long)});
}

}  // namespace prefvec
