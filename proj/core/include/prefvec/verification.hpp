#pragma once

// Executable checks that the user-vector update is exact gradient ascent on
// a fixed-candidate surrogate and that the short-term recursion is an
// exponentially weighted sum with a bounded tail.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "prefvec/core_math.hpp"
#include "prefvec/user_state.hpp"

namespace prefvec {

struct SurrogateInstance {
  std::vector<Vector> item_vecs;
  Vector base_scores;
  std::vector<std::size_t> chosen;  // zero-based indices into item_vecs
  double advantage = 0.0;
  double temperature = 1.0;
  double beta_long = 2.0;
  double beta_short = 5.0;

  std::size_t dim() const { return item_vecs.empty() ? 0 : item_vecs.front().size(); }
  void validate() const;
};

/// A * mean_{m in chosen} log softmax((s0 + <z, v>) / tau)_m
double surrogate_objective(const SurrogateInstance& inst, std::span<const double> z);

/// (A / tau) * (v_chosen - mu(z))
Vector surrogate_gradient(const SurrogateInstance& inst, std::span<const double> z);

/// Central differences of an arbitrary scalar function.
Vector finite_diff_grad(const std::function<double(std::span<const double>)>& f, std::span<const double> z,
                        double h = 1e-5);
Vector finite_diff_grad(const SurrogateInstance& inst, std::span<const double> z, double h = 1e-5);

struct GradientIdentityReport {
  bool passed = false;
  double grad_rel_error = 0.0;    // ||analytic - fd|| / ||analytic||
  double delta_long_error = 0.0;  // max |dz_long - eta_long * grad|
  double delta_short_error = 0.0;
  std::string detail;
};

/// Runs the production update on a state whose effective vector equals
/// `z_eff` and compares it with the scaled analytic gradient, which is itself
/// checked against finite differences. `eta_fault` multiplies the learning
/// rates given to the production update only (negative control).
GradientIdentityReport check_gradient_identity(const SurrogateInstance& inst, std::span<const double> z_eff, const LearningConfig& cfg,
                        double eta_fault = 1.0, double grad_tol = 1e-5, double delta_tol = 1e-10);

struct UnrollReport {
  bool passed = false;
  double max_error_long = 0.0;
  double max_error_short = 0.0;
  int first_divergent_turn = -1;
};

/// Drives apply_increments and compares every intermediate state with the
/// closed-form sums.
UnrollReport check_unroll(std::span<const Vector> increments_long, std::span<const Vector> increments_short,
                        double decay, std::span<const double> z1_long, double tol = 1e-12);

struct TailReport {
  bool passed = false;
  double bound = 0.0;
  double max_tail_norm = 0.0;
  int worst_turn = -1;
};

/// G (1 - decay)^H / decay
double tail_bound(double g, double decay, int horizon);

/// Checks that short-term contributions older than `horizon` turns never
/// exceed the bound. Throws ContractViolation if some increment norm exceeds g.
TailReport check_tail_bound(std::span<const Vector> increments_short, double decay, int horizon, double g,
                            double slack = 1e-9);

struct InstanceRanges {
  std::size_t min_candidates = 2, max_candidates = 8;
  std::size_t min_dim = 2, max_dim = 16;
  std::vector<double> temperatures{0.5, 1.0, 2.0};
};

SurrogateInstance random_instance(std::mt19937_64& rng, const InstanceRanges& ranges = {});

struct GradientIdentitySuite {
  int instances = 0;
  int failures = 0;
  double worst_grad_rel_error = 0.0;
  double worst_delta_error = 0.0;
  std::string first_failure;
};

GradientIdentitySuite run_gradient_identity_suite(int instances, std::uint64_t seed, const LearningConfig& cfg = {}, double eta_fault = 1.0);

struct UnrollSuite {
  int streams = 0;
  int failures = 0;
  double worst_error = 0.0;
};

UnrollSuite run_unroll_suite(int streams, int length, std::uint64_t seed, double decay = 0.1);

struct TailSuite {
  int cases = 0;
  int failures = 0;
  double tightest_ratio = 0.0;  // max observed tail / bound
};

/// Aligned worst-case streams plus random streams for each horizon.
TailSuite run_tail_suite(std::span<const int> horizons, int length, std::uint64_t seed, double decay = 0.1,
                         double g = 1.0);

}  // namespace prefvec
