#include <benchmark/benchmark.h>

#include <random>

#include "prefvec/episode.hpp"
#include "prefvec/retrieval.hpp"
#include "prefvec/user_state.hpp"
#include "prefvec/verification.hpp"

using namespace prefvec;

namespace {

struct Candidates {
  std::vector<std::string> ids;
  Vector s0;
  std::vector<Vector> items;
};

Candidates random_candidates(std::size_t n, std::size_t k) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  Candidates c;
  for (std::size_t i = 0; i < n; ++i) {
    c.ids.push_back("m" + std::to_string(i));
    c.s0.push_back(-std::abs(g(rng)));
    Vector v(k);
    for (auto& x : v) x = g(rng);
    c.items.push_back(std::move(v));
  }
  return c;
}

}  // namespace

static void BM_Embed(benchmark::State& state) {
  const HashingEmbedder emb;
  const std::string text = "Please explain recursion in bullet points and keep it short, in Chinese if possible.";
  for (auto _ : state) benchmark::DoNotOptimize(emb.embed(text));
}
BENCHMARK(BM_Embed);

static void BM_ScoreFromBase(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = random_candidates(n, 31);
  const Vector z(31, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(score_from_base(c.ids, c.s0, c.items, z, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ScoreFromBase)->Arg(8)->Arg(64)->Arg(512);

static void BM_ReinforceUpdate(benchmark::State& state) {
  const auto c = random_candidates(64, 31);
  const LearningConfig cfg;
  UserState st = UserState::fresh("u", 31);
  const auto scored = score_from_base(c.ids, c.s0, c.items, effective_vector(st, cfg), cfg.temperature);
  Vector probs;
  for (const auto& s : scored) probs.push_back(s.policy_prob);
  const std::vector<std::string> chosen{"m1", "m7", "m30"};
  for (auto _ : state) benchmark::DoNotOptimize(reinforce_update(st, cfg, c.ids, c.items, probs, chosen, 0.1));
}
BENCHMARK(BM_ReinforceUpdate);

static void BM_GradientCheck(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const auto inst = random_instance(rng);
  const Vector z(inst.dim(), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(check_gradient_identity(inst, z, {}));
}
BENCHMARK(BM_GradientCheck);

static void BM_Episode(benchmark::State& state) {
  const auto sessions = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(SystemMode::OnlineUser, persona_by_key("D"), sessions, 7));
}
BENCHMARK(BM_Episode)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Population(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(run_population(SystemMode::OnlineUser, builtin_personas(), 10, 7).users.size());
}
BENCHMARK(BM_Population)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
