#include <gtest/gtest.h>

#include <cmath>

#include "prefvec/embedding.hpp"

using namespace prefvec;

TEST(Tokenize, LowercasesAndSplitsOnNonAlphanumerics) {
  EXPECT_EQ(tokenize("Solve   EQUATION!"), (std::vector<std::string>{"solve", "equation"}));
  EXPECT_EQ(tokenize("x2, y-3"), (std::vector<std::string>{"x2", "y", "3"}));
  EXPECT_TRUE(tokenize("  ...  ").empty());
}

TEST(Tokenize, EachNonAsciiCodePointIsAToken) {
  EXPECT_EQ(tokenize("早餐ok"), (std::vector<std::string>{"早", "餐", "ok"}));
}

TEST(HashingEmbedder, EmptyInputIsZeroVector) {
  const HashingEmbedder emb;
  const auto v = emb.embed("");
  ASSERT_EQ(v.size(), 256u);
  for (double x : v) EXPECT_EQ(x, 0.0);
  for (double x : emb.embed("!!! ,,,")) EXPECT_EQ(x, 0.0);
}

TEST(HashingEmbedder, NormalisationInvariance) {
  const HashingEmbedder emb;
  EXPECT_EQ(emb.embed("solve equation"), emb.embed("Solve   EQUATION!"));
}

TEST(HashingEmbedder, UnitNormAndDeterminism) {
  const HashingEmbedder a, b;
  for (const char* text : {"python code", "List three healthy breakfast ideas.", "请用中文回答", "a a a a"}) {
    const auto v = a.embed(text);
    EXPECT_NEAR(norm2(v), 1.0, 1e-9) << text;
    EXPECT_EQ(v, b.embed(text));
  }
}

TEST(HashingEmbedder, BagSemantics) {
  const HashingEmbedder emb;
  EXPECT_EQ(emb.embed("python code sample"), emb.embed("sample python code"));
}

TEST(HashingEmbedder, TopicalSimilarity) {
  const HashingEmbedder emb;
  const auto base = emb.embed("python code");
  EXPECT_GT(cosine(base, emb.embed("python code sample")), cosine(base, emb.embed("weather today")));
}

TEST(HashingEmbedder, SeedAndDimensionMatter) {
  const HashingEmbedder a({256, 1}), b({256, 2}), c({64, 1});
  EXPECT_NE(a.embed("breakfast ideas"), b.embed("breakfast ideas"));
  EXPECT_EQ(c.embed("breakfast ideas").size(), 64u);
  EXPECT_LT(a.bucket("token"), 256u);
}
