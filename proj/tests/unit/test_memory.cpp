#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "prefvec/errors.hpp"
#include "prefvec/memory.hpp"

using namespace prefvec;

namespace {

CardFields fields(std::string user, std::string query, std::string condition, std::string action) {
  CardFields f;
  f.user_id = std::move(user);
  f.session_id = "s1";
  f.source_turn_ids = {0};
  f.source_query = std::move(query);
  f.preference = {std::move(condition), std::move(action)};
  return f;
}

}  // namespace

TEST(ClassifyGlobal, ReferenceCases) {
  EXPECT_TRUE(classify_global({"always", "x"}));
  EXPECT_FALSE(classify_global({"writing SQL queries", "x"}));
  EXPECT_TRUE(classify_global({"hi", "x"}));
  EXPECT_TRUE(classify_global({"general", "x"}));
  EXPECT_TRUE(classify_global({"for any task you do here", "x"}));
  EXPECT_FALSE(classify_global({"python", "x"}));  // short but domain-specific
  EXPECT_FALSE(classify_global({"answering list questions", "x"}));
}

TEST(Note, Synthesis) {
  EXPECT_EQ(synthesize_note({"writing code", "use type hints"}), "When writing code, use type hints.");
}

TEST(PreferenceTuple, Validity) {
  EXPECT_TRUE((PreferenceTuple{"a", "b"}).valid());
  EXPECT_FALSE((PreferenceTuple{"  ", "b"}).valid());
  EXPECT_FALSE((PreferenceTuple{"a", ""}).valid());
}

TEST(MemoryStore, DerivedFieldsAndFallbackBeforeWarmup) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  EXPECT_EQ(store.item_dim(), 31u);
  const auto& c = store.add_card(fields("u", "List three breakfast ideas.", "always", "use bullet points"));
  EXPECT_EQ(c.note, "When always, use bullet points.");
  EXPECT_TRUE(c.is_global);
  EXPECT_EQ(c.embedding, emb.embed("List three breakfast ideas."));
  ASSERT_EQ(c.item_vec.size(), 31u);
  // One card: the running mean is the card itself, so the fallback is zero.
  for (double x : c.item_vec) EXPECT_EQ(x, 0.0);
  EXPECT_FALSE(store.pca().has_value());
}

TEST(MemoryStore, RejectsBadInput) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  auto f = fields("u", "q", "c", "a");
  f.id = "fixed";
  store.add_card(f);
  EXPECT_THROW(store.add_card(f), DuplicateId);
  EXPECT_THROW(store.add_card(fields("u", "", "c", "a")), ContractViolation);
  EXPECT_THROW(store.add_card(fields("u", "q", "", "a")), ContractViolation);
}

TEST(MemoryStore, IdsAreUniqueAndSeeded) {
  const HashingEmbedder emb;
  MemoryStore a(emb, {256, 32, 10, 9}), b(emb, {256, 32, 10, 9});
  std::set<std::string> ids;
  for (int i = 0; i < 20; ++i) {
    const auto& ca = a.add_card(fields("u", "query " + std::to_string(i), "c", "a"));
    const auto& cb = b.add_card(fields("u", "query " + std::to_string(i), "c", "a"));
    EXPECT_EQ(ca.id, cb.id);
    EXPECT_TRUE(ids.insert(ca.id).second);
  }
}

TEST(MemoryStore, SingleFitAtWarmupThenFrozen) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  for (int i = 0; i < 31; ++i) store.add_card(fields("u", "topic number " + std::to_string(i) + " words", "c", "a"));
  EXPECT_FALSE(store.pca().has_value());
  store.add_card(fields("u", "the thirty second card", "c", "a"));
  ASSERT_TRUE(store.pca().has_value());
  const PcaModel fitted = *store.pca();
  EXPECT_EQ(fitted.output_dim(), 31u);
  for (const auto& c : store.cards()) {
    const auto ref = pca_project(fitted, c.embedding);
    for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(c.item_vec[j], ref[j], 1e-9);
  }
  for (int i = 0; i < 10; ++i) {
    const auto& c = store.add_card(fields("u", "later card " + std::to_string(i), "c", "a"));
    const auto ref = pca_project(fitted, c.embedding);
    for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(c.item_vec[j], ref[j], 1e-10);
  }
  EXPECT_EQ(*store.pca(), fitted);
}

TEST(MemoryStore, FitRetriesWhenVarianceIsZero) {
  const HashingEmbedder emb;
  MemoryStore store(emb, {256, 4, 10, 0});
  for (int i = 0; i < 5; ++i) store.add_card(fields("u", "same text", "c", "a"));
  EXPECT_FALSE(store.pca().has_value());
  store.add_card(fields("u", "different text", "c", "a"));
  EXPECT_TRUE(store.pca().has_value());
}

TEST(MemoryStore, GlobalCapAndOrdering) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  for (int i = 0; i < 12; ++i) store.add_card(fields("u", "q", "always", "action " + std::to_string(i)));
  const auto notes = store.global_preferences("u");
  ASSERT_EQ(notes.size(), 10u);
  EXPECT_EQ(notes.front(), "When always, action 11.");
  EXPECT_EQ(notes.back(), "When always, action 2.");
  EXPECT_TRUE(store.global_preferences("nobody").empty());
}

TEST(MemoryStore, PartitionAndUserScoping) {
  const HashingEmbedder emb;
  MemoryStore store(emb);
  for (int i = 0; i < 3; ++i) store.add_card(fields("u", "q", "always", "g" + std::to_string(i)));
  for (int i = 0; i < 5; ++i) store.add_card(fields("u", "q", "answering list questions", "c" + std::to_string(i)));
  store.add_card(fields("v", "q", "answering list questions", "other"));
  EXPECT_EQ(store.global_preferences("u").size(), 3u);
  const auto conds = store.conditional_cards("u");
  ASSERT_EQ(conds.size(), 5u);
  std::set<std::string> seen;
  for (const auto* c : store.global_cards("u")) seen.insert(c->id);
  for (const auto* c : conds) {
    EXPECT_EQ(c->user_id, "u");
    EXPECT_FALSE(c->is_global);
    EXPECT_TRUE(seen.insert(c->id).second);
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_TRUE(MemoryStore(emb).conditional_cards("u").empty());
}
