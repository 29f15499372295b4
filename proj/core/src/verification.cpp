#include "prefvec/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prefvec/errors.hpp"

namespace prefvec {

void SurrogateInstance::validate() const {
  if (item_vecs.empty()) throw ContractViolation("surrogate: no candidates");
  if (base_scores.size() != item_vecs.size()) throw ContractViolation("surrogate: base score count mismatch");
  for (const auto& v : item_vecs) {
    if (v.size() != dim()) throw ContractViolation("surrogate: ragged item vectors");
  }
  if (chosen.empty()) throw ContractViolation("surrogate: empty chosen set");
  for (auto c : chosen) {
    if (c >= item_vecs.size()) throw ContractViolation("surrogate: chosen index out of range");
  }
  if (!(temperature > 0.0)) throw ContractViolation("surrogate: temperature must be > 0");
  if (!(beta_long > 0.0) || !(beta_short > 0.0)) throw ContractViolation("surrogate: betas must be > 0");
}

namespace {

Vector policy(const SurrogateInstance& inst, std::span<const double> z) {
  Vector s(inst.item_vecs.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = inst.base_scores[i] + dot(z, inst.item_vecs[i]);
  return softmax(s, inst.temperature);
}

}  // namespace

double surrogate_objective(const SurrogateInstance& inst, std::span<const double> z) {
  inst.validate();
  if (z.size() != inst.dim()) throw ContractViolation("surrogate: z dimension mismatch");
  // log-sum-exp written out so the oracle does not share softmax().
  const std::size_t n = inst.item_vecs.size();
  Vector s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (inst.base_scores[i] + dot(z, inst.item_vecs[i])) / inst.temperature;
  const double mx = *std::max_element(s.begin(), s.end());
  double acc = 0.0;
  for (double x : s) acc += std::exp(x - mx);
  const double lse = mx + std::log(acc);
  double total = 0.0;
  for (auto c : inst.chosen) total += s[c] - lse;
  return inst.advantage * total / static_cast<double>(inst.chosen.size());
}

Vector surrogate_gradient(const SurrogateInstance& inst, std::span<const double> z) {
  inst.validate();
  const Vector p = policy(inst, z);
  const std::size_t k = inst.dim();
  Vector v_chosen(k, 0.0), mu(k, 0.0);
  for (auto c : inst.chosen) axpy(1.0 / static_cast<double>(inst.chosen.size()), inst.item_vecs[c], v_chosen);
  for (std::size_t i = 0; i < p.size(); ++i) axpy(p[i], inst.item_vecs[i], mu);
  return scaled(sub(v_chosen, mu), inst.advantage / inst.temperature);
}

Vector finite_diff_grad(const std::function<double(std::span<const double>)>& f, std::span<const double> z,
                        double h) {
  if (!(h > 0.0)) throw ContractViolation("finite_diff_grad: step must be > 0");
  Vector x(z.begin(), z.end());
  Vector g(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double orig = x[j];
    x[j] = orig + h;
    const double fp = f(x);
    x[j] = orig - h;
    const double fm = f(x);
    x[j] = orig;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vector finite_diff_grad(const SurrogateInstance& inst, std::span<const double> z, double h) {
  return finite_diff_grad([&](std::span<const double> x) { return surrogate_objective(inst, x); }, z, h);
}

GradientIdentityReport check_gradient_identity(const SurrogateInstance& inst, std::span<const double> z_eff, const LearningConfig& cfg,
                        double eta_fault, double grad_tol, double delta_tol) {
  inst.validate();
  if (z_eff.size() != inst.dim()) throw ContractViolation("check_gradient_identity: z dimension mismatch");
  GradientIdentityReport rep;
  const Vector grad = surrogate_gradient(inst, z_eff);
  const Vector fd = finite_diff_grad(inst, z_eff);
  rep.grad_rel_error = norm2(sub(grad, fd)) / std::max(norm2(grad), 1e-12);

  // Split z_eff evenly between the two components so that
  // beta_long * z_long + beta_short * z_short reproduces it.
  LearningConfig impl = cfg;
  impl.beta_long = inst.beta_long;
  impl.beta_short = inst.beta_short;
  impl.temperature = inst.temperature;
  impl.eta_long *= eta_fault;
  impl.eta_short *= eta_fault;
  UserState st = UserState::fresh("gradient-check", inst.dim());
  st.z_long = scaled(z_eff, 0.5 / inst.beta_long);
  st.z_short = scaled(z_eff, 0.5 / inst.beta_short);
  const Vector z_check = effective_vector(st, impl);

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < inst.item_vecs.size(); ++i) ids.push_back("m" + std::to_string(i));
  std::vector<std::string> chosen;
  for (auto c : inst.chosen) chosen.push_back(ids[c]);
  const Vector probs = policy(inst, z_check);
  const UpdateReport up = reinforce_update(st, impl, ids, inst.item_vecs, probs, chosen, inst.advantage);

  // The chain rule through z_eff = beta * z gives grad_z = beta * grad_eff,
  // so a step of (eta / beta) along grad_z is eta * grad_eff.
  for (std::size_t j = 0; j < grad.size(); ++j) {
    const double want_l = (cfg.eta_long / inst.beta_long) * (inst.beta_long * grad[j]);
    const double want_s = (cfg.eta_short / inst.beta_short) * (inst.beta_short * grad[j]);
    rep.delta_long_error = std::max(rep.delta_long_error, std::abs(up.delta_long[j] - want_l));
    rep.delta_short_error = std::max(rep.delta_short_error, std::abs(up.delta_short[j] - want_s));
  }
  rep.passed = rep.grad_rel_error < grad_tol && rep.delta_long_error <= delta_tol &&
               rep.delta_short_error <= delta_tol && up.applied;
  if (!rep.passed) {
    std::ostringstream os;
    os.precision(17);
    os << "gradient relative error " << rep.grad_rel_error << " (tol " << grad_tol << "), delta_long error "
       << rep.delta_long_error << ", delta_short error " << rep.delta_short_error << " (tol " << delta_tol
       << "), K=" << inst.item_vecs.size() << " k=" << inst.dim() << " tau=" << inst.temperature
       << " A=" << inst.advantage;
    rep.detail = os.str();
  }
  return rep;
}

UnrollReport check_unroll(std::span<const Vector> increments_long, std::span<const Vector> increments_short,
                        double decay, std::span<const double> z1_long, double tol) {
  if (increments_long.size() != increments_short.size())
    throw ContractViolation("check_unroll: increment streams differ in length");
  const std::size_t k = z1_long.size();
  UserState st = UserState::fresh("unroll-check", k);
  st.z_long.assign(z1_long.begin(), z1_long.end());
  UnrollReport rep;
  for (std::size_t t = 0; t < increments_long.size(); ++t) {
    apply_increments(st, decay, increments_long[t], increments_short[t]);
    // Closed forms after t + 1 increments.
    for (std::size_t j = 0; j < k; ++j) {
      double zl = z1_long[j];
      double zs = 0.0;
      for (std::size_t i = 0; i <= t; ++i) {
        zl += increments_long[i][j];
        zs += std::pow(1.0 - decay, static_cast<double>(t - i)) * increments_short[i][j];
      }
      const double el = std::abs(zl - st.z_long[j]);
      const double es = std::abs(zs - st.z_short[j]);
      rep.max_error_long = std::max(rep.max_error_long, el);
      rep.max_error_short = std::max(rep.max_error_short, es);
      if ((el > tol || es > tol) && rep.first_divergent_turn < 0) rep.first_divergent_turn = static_cast<int>(t) + 1;
    }
  }
  rep.passed = rep.first_divergent_turn < 0;
  return rep;
}

double tail_bound(double g, double decay, int horizon) {
  if (!(decay > 0.0 && decay <= 1.0)) throw ContractViolation("tail_bound: decay must be in (0, 1]");
  return g * std::pow(1.0 - decay, horizon) / decay;
}

TailReport check_tail_bound(std::span<const Vector> increments_short, double decay, int horizon, double g,
                            double slack) {
  if (horizon < 0) throw ContractViolation("check_tail_bound: negative horizon");
  for (const auto& d : increments_short) {
    if (norm2(d) > g * (1.0 + 1e-12)) throw ContractViolation("check_tail_bound: increment norm exceeds G");
  }
  TailReport rep;
  rep.bound = tail_bound(g, decay, horizon);
  const std::size_t n = increments_short.size();
  const std::size_t k = n ? increments_short.front().size() : 0;
  // State at turn t (1-based) holds increments 1..t-1; the tail is i <= t-1-H.
  for (std::size_t t = 1; t <= n + 1; ++t) {
    Vector tail(k, 0.0);
    for (std::size_t i = 1; i + 1 + static_cast<std::size_t>(horizon) <= t && i <= n; ++i) {
      axpy(std::pow(1.0 - decay, static_cast<double>(t - 1 - i)), increments_short[i - 1], tail);
    }
    const double nrm = norm2(tail);
    if (nrm > rep.max_tail_norm) {
      rep.max_tail_norm = nrm;
      rep.worst_turn = static_cast<int>(t);
    }
  }
  rep.passed = rep.max_tail_norm <= rep.bound + slack;
  return rep;
}

SurrogateInstance random_instance(std::mt19937_64& rng, const InstanceRanges& ranges) {
  std::uniform_int_distribution<std::size_t> kdist(ranges.min_candidates, ranges.max_candidates);
  std::uniform_int_distribution<std::size_t> ddist(ranges.min_dim, ranges.max_dim);
  std::uniform_int_distribution<std::size_t> tdist(0, ranges.temperatures.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  SurrogateInstance inst;
  const std::size_t n = kdist(rng);
  const std::size_t k = ddist(rng);
  inst.temperature = ranges.temperatures[tdist(rng)];
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(k);
    for (auto& x : v) x = normal(rng) * 0.5;
    inst.item_vecs.push_back(std::move(v));
    inst.base_scores.push_back(-std::abs(normal(rng)));
  }
  std::uniform_int_distribution<std::size_t> cdist(1, n);
  const std::size_t n_chosen = cdist(rng);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  inst.chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_chosen));
  std::sort(inst.chosen.begin(), inst.chosen.end());
  inst.advantage = unit(rng);
  if (std::abs(inst.advantage) < 0.05) inst.advantage = 0.05;
  inst.beta_long = 0.5 + 3.0 * (unit(rng) + 1.0);
  inst.beta_short = 0.5 + 3.0 * (unit(rng) + 1.0);
  return inst;
}

GradientIdentitySuite run_gradient_identity_suite(int instances, std::uint64_t seed, const LearningConfig& cfg, double eta_fault) {
  GradientIdentitySuite suite;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < instances; ++i) {
    const SurrogateInstance inst = random_instance(rng);
    Vector z(inst.dim());
    for (auto& x : z) x = normal(rng) * 0.5;
    const GradientIdentityReport rep = check_gradient_identity(inst, z, cfg, eta_fault);
    ++suite.instances;
    suite.worst_grad_rel_error = std::max(suite.worst_grad_rel_error, rep.grad_rel_error);
    suite.worst_delta_error = std::max({suite.worst_delta_error, rep.delta_long_error, rep.delta_short_error});
    if (!rep.passed) {
      if (suite.failures == 0) suite.first_failure = "instance " + std::to_string(i) + ": " + rep.detail;
      ++suite.failures;
    }
  }
  return suite;
}

UnrollSuite run_unroll_suite(int streams, int length, std::uint64_t seed, double decay) {
  UnrollSuite suite;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> ddist(2, 16);
  for (int s = 0; s < streams; ++s) {
    const std::size_t k = ddist(rng);
    std::vector<Vector> dl(length, Vector(k)), ds(length, Vector(k));
    Vector z1(k);
    for (auto& x : z1) x = normal(rng);
    for (int t = 0; t < length; ++t) {
      for (auto& x : dl[t]) x = 0.1 * normal(rng);
      for (auto& x : ds[t]) x = 0.1 * normal(rng);
    }
    const UnrollReport rep = check_unroll(dl, ds, decay, z1);
    ++suite.streams;
    suite.worst_error = std::max({suite.worst_error, rep.max_error_long, rep.max_error_short});
    if (!rep.passed) ++suite.failures;
  }
  return suite;
}

TailSuite run_tail_suite(std::span<const int> horizons, int length, std::uint64_t seed, double decay, double g) {
  TailSuite suite;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int h : horizons) {
    // Aligned stream: every increment is G e_1, the worst case for the bound.
    std::vector<Vector> aligned(length, Vector(4, 0.0));
    for (auto& d : aligned) d[0] = g;
    // Random stream rescaled to norm at most G.
    std::vector<Vector> random(length, Vector(4));
    for (auto& d : random) {
      for (auto& x : d) x = normal(rng);
      const double n = norm2(d);
      if (n > 0.0) d = scaled(d, g * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / n);
    }
    for (const auto* stream : {&aligned, &random}) {
      const TailReport rep = check_tail_bound(*stream, decay, h, g);
      ++suite.cases;
      if (!rep.passed) ++suite.failures;
      suite.tightest_ratio = std::max(suite.tightest_ratio, rep.max_tail_norm / rep.bound);
    }
  }
  return suite;
}

}  // namespace prefvec
