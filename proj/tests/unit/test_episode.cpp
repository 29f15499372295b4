#include <gtest/gtest.h>

#include "prefvec/episode.hpp"
#include "prefvec/errors.hpp"

using namespace prefvec;

TEST(Episode, VanillaNeverTouchesMemory) {
  const Persona one[] = {persona_by_key("A")};
  const auto run = run_population(SystemMode::Vanilla, one, 3, 7);
  EXPECT_EQ(run.store->size(), 0u);
  for (const auto& r : run.users[0].records) {
    EXPECT_TRUE(r.injected_ids.empty());
    EXPECT_TRUE(r.retrieval.candidates.empty());
    EXPECT_FALSE(r.update_applied);
  }
  for (double x : run.users[0].state.z_long) EXPECT_EQ(x, 0.0);
}

TEST(Episode, StaticMemoryStoresButNeverLearns) {
  const Persona one[] = {persona_by_key("C")};
  const auto run = run_population(SystemMode::StaticMem, one, 4, 7);
  EXPECT_GT(run.store->size(), 0u);
  for (const auto& r : run.users[0].records) {
    EXPECT_FALSE(r.update_applied);
    for (const auto& c : r.retrieval.candidates) EXPECT_EQ(c.user_bonus, 0.0);
  }
  for (double x : run.users[0].state.z_long) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(run.users[0].state.baseline, 0.0);
}

TEST(Episode, StaticAndOnlineAgreeBeforeAnyUpdate) {
  for (const auto& p : builtin_personas()) {
    const auto s = run_episode(SystemMode::StaticMem, p, 3, 11);
    const auto o = run_episode(SystemMode::OnlineUser, p, 3, 11);
    EXPECT_EQ(s.front().retrieval.candidates, o.front().retrieval.candidates);
    EXPECT_EQ(s.front().retrieval.selected, o.front().retrieval.selected);
  }
}

TEST(Episode, StructureAndPhasePurity) {
  const auto log = run_episode(SystemMode::OnlineUser, persona_by_key("D"), 5, 3);
  ASSERT_EQ(log.size(), 20u);
  for (const auto& r : log) {
    EXPECT_EQ(r.satisfaction == 1.0, r.violations.empty());
    if (r.session_index == 2) {
      EXPECT_FALSE(r.states_preference);
      EXPECT_FALSE(r.complaint);
      EXPECT_EQ(r.phase, Phase::Retention);
    }
    if (r.reward) {
      EXPECT_FALSE(r.followup.empty());
      EXPECT_GE(*r.reward, -1.0);
      EXPECT_LE(*r.reward, 1.0);
    } else {
      EXPECT_TRUE(r.followup.empty());
    }
    if (r.update_applied) EXPECT_FALSE(r.retrieval.selected.empty());
  }
}

TEST(Episode, Deterministic) {
  const auto a = run_episode(SystemMode::OnlineUser, persona_by_key("B"), 4, 9);
  const auto b = run_episode(SystemMode::OnlineUser, persona_by_key("B"), 4, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].response, b[i].response);
    EXPECT_EQ(a[i].injected_ids, b[i].injected_ids);
    EXPECT_EQ(a[i].retrieval.candidates, b[i].retrieval.candidates);
    EXPECT_EQ(a[i].z_long_norm, b[i].z_long_norm);
  }
}

TEST(Episode, Preconditions) {
  EXPECT_THROW(run_episode(SystemMode::OnlineUser, persona_by_key("A"), 1, 1), ContractViolation);
  PipelineConfig bad;
  bad.learning.temperature = 2.0;
  EXPECT_THROW(run_episode(SystemMode::OnlineUser, persona_by_key("A"), 3, 1, bad), ContractViolation);
  EXPECT_EQ(mode_from_string("online_user"), SystemMode::OnlineUser);
  EXPECT_THROW(mode_from_string("offline"), ParseError);
}

TEST(Episode, NormHistoryPerSession) {
  const Persona one[] = {persona_by_key("A")};
  const auto run = run_population(SystemMode::OnlineUser, one, 6, 5);
  const auto& h = run.users[0].state.norm_history;
  ASSERT_EQ(h.size(), 7u);
  for (int s = 0; s <= 6; ++s) EXPECT_EQ(h[s].session, s);
  EXPECT_EQ(h[0].norm, 0.0);
}
