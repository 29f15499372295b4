#include <gtest/gtest.h>

#include <sstream>

#include "prefvec/errors.hpp"
#include "prefvec/sensitivity.hpp"

using namespace prefvec;

namespace {

struct NoisyRun {
  PipelineConfig cfg;
  std::vector<TurnRecord> log;
  std::unique_ptr<Embedder> embedder;
};

const NoisyRun& noisy_run() {
  static const NoisyRun run = [] {
    NoisyRun r;
    r.cfg.script.noise_rate = 0.3;
    const auto& personas = builtin_personas();
    auto pop = run_population(SystemMode::OnlineUser, personas, 6, 13, r.cfg);
    for (auto& u : pop.users) r.log.insert(r.log.end(), u.records.begin(), u.records.end());
    r.embedder = std::make_unique<HashingEmbedder>(r.cfg.embedder);
    return r;
  }();
  return run;
}

}  // namespace

TEST(Perturbations, NamesAndErrors) {
  const auto names = perturbation_names();
  EXPECT_EQ(names.front(), "identity");
  for (const auto& n : names) EXPECT_NO_THROW(make_perturbation(n, {}, {}));
  try {
    make_perturbation("bogus", {}, {});
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("fixed_g_1.0"), std::string::npos);
  }
}

TEST(Perturbations, Contents) {
  const RewardConfig r;
  EXPECT_EQ(make_perturbation("half_neg_keywords", r, {}).reward.negative_keywords.size(), 3u);
  EXPECT_EQ(make_perturbation("noisy_neg_keywords", r, {}).reward.negative_keywords.size(), 10u);
  EXPECT_EQ(make_perturbation("clip_half", r, {}).reward.clip_high, 0.5);
  EXPECT_EQ(make_perturbation("dampen_0.1", r, {}).reward.dampen_factor, 0.1);
  EXPECT_EQ(make_perturbation("fixed_g_1.0", r, {}).gate.fixed, 1.0);
  const auto t = make_perturbation("thresh_0.3_0.6", r, {});
  EXPECT_EQ(t.gate.low_sim, 0.3);
  EXPECT_EQ(t.gate.high_sim_neg, 0.6);
}

TEST(Replay, BaseConfigReproducesLoggedNorms) {
  const auto& run = noisy_run();
  const auto replayed = replay_updates(run.log, run.cfg, run.cfg.reward, run.cfg.gate, *run.embedder);
  ASSERT_EQ(replayed.size(), 6u);
  for (const auto& u : replayed) {
    double logged = -1.0;
    for (const auto& r : run.log)
      if (r.user_id == u.user_id) logged = r.z_long_norm;
    EXPECT_NEAR(norm2(u.z_long), logged, 1e-12) << u.user_id;
    EXPECT_EQ(u.gate_changes, 0);
  }
}

TEST(Replay, IdentityIsExactlyNeutral) {
  const auto& run = noisy_run();
  const auto res = sensitivity_harness(run.log, run.cfg, make_perturbation("identity", run.cfg.reward, run.cfg.gate),
                                       *run.embedder);
  EXPECT_EQ(res.delta_pct, 0.0);
  EXPECT_EQ(res.mean_cosine, 1.0);
  EXPECT_EQ(res.gate_changes, 0);
  EXPECT_GT(res.base_mean_norm, 0.0);
}

TEST(Replay, FullGateAmplifiesUpdates) {
  const auto& run = noisy_run();
  const auto res = sensitivity_harness(run.log, run.cfg,
                                       make_perturbation("fixed_g_1.0", run.cfg.reward, run.cfg.gate), *run.embedder);
  EXPECT_GT(res.mean_norm, res.base_mean_norm);
  EXPECT_LT(res.mean_cosine, 1.0);
}

TEST(Replay, Deterministic) {
  const auto& run = noisy_run();
  const auto p = make_perturbation("thresh_0.3_0.6", run.cfg.reward, run.cfg.gate);
  const auto a = sensitivity_harness(run.log, run.cfg, p, *run.embedder);
  const auto b = sensitivity_harness(run.log, run.cfg, p, *run.embedder);
  EXPECT_EQ(a.mean_norm, b.mean_norm);
  EXPECT_EQ(a.mean_cosine, b.mean_cosine);
  EXPECT_EQ(a.gate_changes, b.gate_changes);
}

TEST(Replay, IncompleteTraceIsRejected) {
  auto log = noisy_run().log;
  auto it = std::find_if(log.begin(), log.end(), [](const TurnRecord& r) { return !r.retrieval.candidates.empty(); });
  ASSERT_NE(it, log.end());
  it->retrieval.item_vecs.clear();
  const auto& run = noisy_run();
  EXPECT_THROW(replay_updates(log, run.cfg, run.cfg.reward, run.cfg.gate, *run.embedder), ReplayImpossible);
}

TEST(Replay, CsvColumns) {
  std::ostringstream os;
  const std::vector<SensitivityResult> rs{{"identity", 1.0, 1.0, 0.0, 1.0, 0, {}}};
  write_sensitivity_csv(os, rs, 3, "ff");
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "config,mean_norm_z_long,delta_pct,cosine_to_base,gate_changes,seed,config_fingerprint");
}

TEST(ClosedLoop, IdentityNeutralAndFullGateAmplifies) {
  PipelineConfig cfg;
  cfg.script.noise_rate = 0.3;
  const auto& personas = builtin_personas();
  for (bool shared : {false, true}) {
    const auto id = closed_loop_sensitivity(personas, 4, 5, cfg, make_perturbation("identity", cfg.reward, cfg.gate),
                                            shared);
    EXPECT_EQ(id.delta_pct, 0.0);
    EXPECT_EQ(id.mean_cosine, 1.0);
    EXPECT_EQ(id.gate_changes, 0);
    ASSERT_EQ(id.users.size(), personas.size());
    const auto full = closed_loop_sensitivity(personas, 4, 5, cfg,
                                              make_perturbation("fixed_g_1.0", cfg.reward, cfg.gate), shared);
    EXPECT_GT(full.mean_norm, full.base_mean_norm);
    EXPECT_GT(full.gate_changes, 0);
  }
}
