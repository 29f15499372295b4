#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prefvec/errors.hpp"
#include "prefvec/verification.hpp"

using namespace prefvec;

namespace {

SurrogateInstance small_instance() {
  SurrogateInstance inst;
  inst.item_vecs = {{0.5, -0.2}, {-0.3, 0.8}, {0.1, 0.1}};
  inst.base_scores = {-0.2, -0.5, -0.9};
  inst.chosen = {0, 2};
  inst.advantage = 0.7;
  inst.temperature = 1.3;
  return inst;
}

}  // namespace

TEST(Surrogate, ZeroAdvantageAndSingleton) {
  auto inst = small_instance();
  inst.advantage = 0.0;
  EXPECT_EQ(surrogate_objective(inst, Vector{3, -1}), 0.0);
  for (double g : finite_diff_grad(inst, Vector{3, -1})) EXPECT_EQ(g, 0.0);
  SurrogateInstance one;
  one.item_vecs = {{1.0, 2.0}};
  one.base_scores = {-0.4};
  one.chosen = {0};
  one.advantage = 0.9;
  EXPECT_NEAR(surrogate_objective(one, Vector{0.3, 0.3}), 0.0, 1e-15);
}

TEST(Surrogate, StepByStepArithmetic) {
  const auto inst = small_instance();
  const Vector z{0.4, -0.6};
  double s[3], e[3], zsum = 0.0;
  for (int i = 0; i < 3; ++i) {
    s[i] = (inst.base_scores[i] + z[0] * inst.item_vecs[i][0] + z[1] * inst.item_vecs[i][1]) / inst.temperature;
    e[i] = std::exp(s[i]);
    zsum += e[i];
  }
  const double ref = inst.advantage * 0.5 * (std::log(e[0] / zsum) + std::log(e[2] / zsum));
  EXPECT_NEAR(surrogate_objective(inst, z), ref, 1e-12);
}

TEST(Surrogate, InvalidInstances) {
  auto inst = small_instance();
  inst.chosen.clear();
  EXPECT_THROW(surrogate_objective(inst, Vector{0, 0}), ContractViolation);
  inst = small_instance();
  inst.chosen = {5};
  EXPECT_THROW(surrogate_objective(inst, Vector{0, 0}), ContractViolation);
}

TEST(FiniteDiff, QuadraticOracle) {
  const auto f = [](std::span<const double> x) { return 3.0 * x[0] * x[0] - 2.0 * x[0] * x[1] + 0.5 * x[1]; };
  const auto g = finite_diff_grad(f, Vector{1.5, -2.0});
  EXPECT_NEAR(g[0], 6.0 * 1.5 + 4.0, 1e-8);
  EXPECT_NEAR(g[1], -3.0 + 0.5, 1e-8);
  EXPECT_THROW(finite_diff_grad(f, Vector{1, 1}, 0.0), ContractViolation);
}

TEST(GradientIdentity, AnalyticGradientMatchesFiniteDifferences) {
  const auto inst = small_instance();
  const Vector z{0.2, 0.9};
  const auto a = surrogate_gradient(inst, z);
  const auto fd = finite_diff_grad(inst, z);
  EXPECT_LT(norm2(sub(a, fd)) / norm2(a), 1e-6);
}

TEST(GradientIdentity, AllChosenAndTemperatureSweep) {
  for (double tau : {0.5, 1.0, 2.0}) {
    auto inst = small_instance();
    inst.temperature = tau;
    inst.chosen = {0, 1, 2};
    const auto rep = check_gradient_identity(inst, Vector{0.3, -0.1}, {});
    EXPECT_TRUE(rep.passed) << rep.detail;
  }
}

TEST(GradientIdentity, SeededSuitePasses) {
  const auto suite = run_gradient_identity_suite(300, 99);
  EXPECT_EQ(suite.failures, 0) << suite.first_failure;
  EXPECT_LT(suite.worst_grad_rel_error, 1e-5);
  EXPECT_LE(suite.worst_delta_error, 1e-10);
}

TEST(GradientIdentity, LearningRateMismatchIsCaught) {
  const auto rep = check_gradient_identity(small_instance(), Vector{0.3, -0.1}, {}, 1.5);
  EXPECT_FALSE(rep.passed);
  EXPECT_NE(rep.detail.find("delta_long"), std::string::npos);
  EXPECT_GT(run_gradient_identity_suite(20, 3, {}, 1.01).failures, 0);
}

TEST(ShortTermUnroll, ZeroIncrements) {
  const std::vector<Vector> zeros(10, Vector{0, 0});
  const auto rep = check_unroll(zeros, zeros, 0.1, Vector{1, -2});
  EXPECT_TRUE(rep.passed);
}

TEST(ShortTermUnroll, GeometricFactor) {
  std::vector<Vector> dl(10, Vector{0.0}), ds(10, Vector{0.0});
  ds[0] = {1.0};
  UserState st = UserState::fresh("u", 1);
  for (std::size_t t = 0; t < 10; ++t) apply_increments(st, 0.1, dl[t], ds[t]);
  EXPECT_NEAR(st.z_short[0], std::pow(0.9, 9), 1e-15);  // read at t = 11 per the unrolled sum
  EXPECT_NEAR(std::pow(0.9, 10), 0.34868, 1e-5);
  EXPECT_TRUE(check_unroll(dl, ds, 0.1, Vector{0.0}).passed);
}

TEST(ShortTermUnroll, RandomStreamsAndMismatch) {
  const auto suite = run_unroll_suite(20, 200, 5);
  EXPECT_EQ(suite.failures, 0);
  EXPECT_LT(suite.worst_error, 1e-12);
  EXPECT_THROW(check_unroll(std::vector<Vector>(2, Vector{0}), std::vector<Vector>(3, Vector{0}), 0.1, Vector{0}),
               ContractViolation);
}

TEST(TailBound, ClosedForms) {
  EXPECT_NEAR(tail_bound(1.0, 0.1, 0), 10.0, 1e-12);
  EXPECT_NEAR(tail_bound(1.0, 0.1, 10), 3.4868, 1e-4);
}

TEST(TailBound, AlignedWorstCaseNeverExceeds) {
  for (int h : {0, 5, 10, 20}) {
    const std::vector<Vector> aligned(500, Vector{1.0, 0.0});
    const auto rep = check_tail_bound(aligned, 0.1, h, 1.0);
    EXPECT_TRUE(rep.passed);
    EXPECT_GT(rep.max_tail_norm / rep.bound, 0.99);  // the bound is nearly attained
  }
  const std::vector<Vector> too_big(3, Vector{2.0});
  EXPECT_THROW(check_tail_bound(too_big, 0.1, 0, 1.0), ContractViolation);
}
