#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "prefvec/errors.hpp"
#include "prefvec/retrieval.hpp"

using namespace prefvec;

TEST(TransformQuery, TaskClasses) {
  EXPECT_EQ(transform_query("solve this integral"), "user preferences for math: solve this integral");
  EXPECT_FALSE(transform_query("hello there").has_value());
  EXPECT_EQ(transform_query("fix this python bug"), "user preferences for coding: fix this python bug");
  EXPECT_EQ(transform_query("Explain why the sky is blue"),
            "user preferences for explanation: Explain why the sky is blue");
  EXPECT_EQ(transform_query("What is the capital of France?"),
            "user preferences for explanation: What is the capital of France?");
  // math outranks coding when both match
  EXPECT_EQ(transform_query("write python code to solve an equation")->rfind("user preferences for math: ", 0), 0u);
}

TEST(RetrievalConfig, Validation) {
  EXPECT_NO_THROW((RetrievalConfig{64, 3, 1.0}).validate());
  EXPECT_THROW((RetrievalConfig{2, 3, 1.0}).validate(), ContractViolation);
  EXPECT_THROW((RetrievalConfig{64, 0, 1.0}).validate(), ContractViolation);
  EXPECT_THROW((RetrievalConfig{64, 3, 0.0}).validate(), ContractViolation);
}

TEST(CosineReranker, ClosedForms) {
  const HashingEmbedder emb;
  const CosineReranker rr(emb);
  EXPECT_NEAR(base_score(rr, "use bullet points", "use bullet points"), std::log(1.0 / (1.0 + std::exp(-4.0))), 1e-12);
  EXPECT_NEAR(base_score(rr, "use bullet points", "use bullet points"), -0.01815, 1e-4);
  EXPECT_NEAR(base_score(rr, "", "anything"), -std::log(2.0), 1e-12);
  EXPECT_LT(base_score(rr, "alpha", "beta gamma"), 0.0);
}

TEST(ScoreFromBase, ClosedFormTwoCandidates) {
  const std::vector<std::string> ids{"a", "b"};
  const Vector base{0.0, 0.0};
  const std::vector<Vector> vecs{{std::log(2.0)}, {0.0}};
  const Vector z{1.0};
  const auto s = score_from_base(ids, base, vecs, z, 1.0);
  EXPECT_NEAR(s[0].policy_prob, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(s[1].policy_prob, 1.0 / 3.0, 1e-9);
}

TEST(ScoreFromBase, MatchesSoftmaxOracleAndInvariants) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 100; ++t) {
    const std::size_t K = 5, k = 4;
    std::vector<std::string> ids;
    Vector base;
    std::vector<Vector> vecs;
    for (std::size_t i = 0; i < K; ++i) {
      ids.push_back("c" + std::to_string(i));
      base.push_back(-std::abs(n(rng)));
      Vector v(k);
      for (auto& x : v) x = n(rng);
      vecs.push_back(v);
    }
    Vector z(k);
    for (auto& x : z) x = n(rng);
    const double tau = 0.5 + (t % 3) * 0.75;
    const auto s = score_from_base(ids, base, vecs, z, tau);
    std::vector<double> totals;
    double psum = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      double bonus = 0.0;
      for (std::size_t j = 0; j < k; ++j) bonus += z[j] * vecs[i][j];
      EXPECT_NEAR(s[i].user_bonus, bonus, 1e-12);
      EXPECT_EQ(s[i].total_score, s[i].base_score + s[i].user_bonus);
      totals.push_back(base[i] + bonus);
      psum += s[i].policy_prob;
    }
    const auto ref = oracle::softmax(totals, tau);
    for (std::size_t i = 0; i < K; ++i) EXPECT_NEAR(s[i].policy_prob, ref[i], 1e-10);
    EXPECT_NEAR(psum, 1.0, 1e-9);
  }
}

TEST(ScoreFromBase, ZeroStateIsNeutral) {
  const std::vector<std::string> ids{"a", "b", "c"};
  const Vector base{-0.3, -0.1, -0.7};
  const std::vector<Vector> vecs{{1, 2}, {-3, 4}, {5, 6}};
  const auto s = score_from_base(ids, base, vecs, Vector{0, 0}, 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s[i].total_score, base[i]);
  const auto ref = oracle::softmax({base.begin(), base.end()}, 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s[i].policy_prob, ref[i], 1e-12);
}

TEST(ScoreFromBase, DimensionMismatchThrows) {
  const std::vector<std::string> ids{"a"};
  EXPECT_THROW(score_from_base(ids, Vector{0.0}, std::vector<Vector>{{1, 2}}, Vector{1, 2, 3}, 1.0),
               ContractViolation);
}

TEST(SelectTopJ, OrderingAndTies) {
  auto sc = [](std::string id, double s) { return ScoredCandidate{std::move(id), s, 0.0, s, 0.0}; };
  EXPECT_EQ(select_top_j(std::vector{sc("a", 1), sc("b", 2)}, 3), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(select_top_j(std::vector{sc("x", 5), sc("y", 1), sc("z", 3)}, 2), (std::vector<std::string>{"x", "z"}));
  std::vector<ScoredCandidate> tied{sc("d", 1), sc("b", 1), sc("c", 1), sc("a", 1)};
  std::sort(tied.begin(), tied.end(), [](auto& l, auto& r) { return l.card_id < r.card_id; });
  do {
    EXPECT_EQ(select_top_j(tied, 2), (std::vector<std::string>{"a", "b"}));
  } while (std::next_permutation(tied.begin(), tied.end(),
                                 [](auto& l, auto& r) { return l.card_id < r.card_id; }));
  EXPECT_THROW(select_top_j(tied, 0), ContractViolation);
}

TEST(SelectTopJ, MonotoneBonusNeverLowersRank) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<ScoredCandidate> c;
    for (int i = 0; i < 6; ++i) {
      const double s = n(rng);
      c.push_back({"c" + std::to_string(i), s, 0.0, s, 0.0});
    }
    auto rank_of = [](const std::vector<ScoredCandidate>& v, const std::string& id) {
      const auto order = select_top_j(v, v.size());
      return std::find(order.begin(), order.end(), id) - order.begin();
    };
    const auto before = rank_of(c, "c2");
    c[2].user_bonus += std::abs(n(rng));
    c[2].total_score = c[2].base_score + c[2].user_bonus;
    EXPECT_LE(rank_of(c, "c2"), before);
  }
}

TEST(DenseRetrieve, MatchesExhaustiveSortOracle) {
  fixture::TableEmbedder emb(3);
  MemoryStore store(emb, {3, 100, 10, 1});
  std::mt19937_64 rng(47);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::pair<std::string, Vector>> made;
  for (int i = 0; i < 10; ++i) {
    Vector v{n(rng), n(rng), n(rng)};
    if (i == 7) v = made[2].second;  // exact tie
    const std::string q = "query " + std::to_string(i);
    emb.set(q, v);
    CardFields f{"u", "s", {0}, q, {"answering list questions", "a" + std::to_string(i)}, std::nullopt};
    made.emplace_back(store.add_card(f).id, v);
  }
  emb.set("probe", Vector{1.0, 0.5, -0.2});
  auto hits = dense_retrieve(store, "u", "probe", 64);
  ASSERT_EQ(hits.size(), 10u);
  std::vector<std::pair<double, std::string>> ref;
  for (auto& [id, v] : made) ref.emplace_back(-cosine(v, Vector{1.0, 0.5, -0.2}), id);
  std::sort(ref.begin(), ref.end());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(hits[i].card->id, ref[i].second);
  EXPECT_EQ(dense_retrieve(store, "u", "probe", 4).size(), 4u);
  EXPECT_TRUE(dense_retrieve(store, "nobody", "probe", 64).empty());
}

TEST(Retrieve, TraceIsConsistent) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  for (const char* q : {"List three healthy breakfast ideas.", "Name three ways to save money.", "Explain why it rains."})
    store.add_card({"u", "s", {0}, q, {"answering list questions", "use bullet points"}, std::nullopt});
  const CosineReranker rr(emb);
  const Vector z(store.item_dim(), 0.0);
  const auto tr = retrieve(store, "u", "List three healthy breakfast ideas.", z, rr, {});
  ASSERT_EQ(tr.candidates.size(), 3u);
  EXPECT_EQ(tr.item_vecs.size(), 3u);
  EXPECT_EQ(tr.selected.size(), 3u);
  EXPECT_NEAR(tr.sq_max, 1.0, 1e-12);
  const auto none = retrieve(store, "v", "anything", z, rr, {});
  EXPECT_TRUE(none.candidates.empty());
  EXPECT_EQ(none.sq_max, 0.0);
}
