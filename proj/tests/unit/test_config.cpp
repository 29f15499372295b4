#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "prefvec/config.hpp"
#include "prefvec/errors.hpp"
#include "prefvec/hashing.hpp"

using namespace prefvec;

TEST(Hashing, KnownDigests) {
  EXPECT_EQ(sha1_hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(sha1_hex(""), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  // `git hash-object` of a file containing "hello\n"
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(ConfigParse, CommentsBlanksAndWhitespace) {
  const auto kv = parse_config_text("# header\n\n  run.seed =  11 \nlearning.decay=0.2\r\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("run.seed"), "11");
  EXPECT_EQ(kv.at("learning.decay"), "0.2");
}

TEST(ConfigParse, Errors) {
  EXPECT_THROW(parse_config_text("run.seed 11\n"), ParseError);
  EXPECT_THROW(parse_config_text("seed = 11\n"), ParseError);
  EXPECT_THROW(parse_config_text("run.seed = 1\nrun.seed = 2\n"), ParseError);
  try {
    parse_config_text("run.seed = 1\n\nbogus\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  RunConfig cfg;
  EXPECT_THROW(apply_config(cfg, {{"run.nope", "1"}}), ParseError);
  EXPECT_THROW(apply_config(cfg, {{"learning.decay", "abc"}}), ParseError);
  EXPECT_THROW(apply_config(cfg, {{"run.shared_store", "maybe"}}), ParseError);
  EXPECT_THROW(apply_config(cfg, {{"run.modes", "turbo"}}), ParseError);
  EXPECT_THROW(read_config_file("/nonexistent/prefvec.cfg"), ParseError);
}

TEST(ConfigApply, ValidationFailures) {
  RunConfig cfg;
  EXPECT_THROW(apply_config(cfg, {{"run.sessions", "1"}}), ContractViolation);
  RunConfig c2;
  EXPECT_THROW(apply_config(c2, {{"learning.decay", "0"}}), ContractViolation);
}

TEST(ConfigApply, TypedValues) {
  RunConfig cfg;
  apply_config(cfg, {{"run.modes", "all"},
                     {"run.personas", "A,D"},
                     {"retrieval.temperature", "0.5"},
                     {"reward.negative_keywords", "bad, worse"},
                     {"gate.fixed", "1"},
                     {"run.shared_store", "true"},
                     {"run.out", "/tmp/x"}});
  EXPECT_EQ(cfg.modes.size(), 3u);
  EXPECT_EQ(cfg.personas, (std::vector<std::string>{"A", "D"}));
  EXPECT_EQ(cfg.pipeline.retrieval.temperature, 0.5);
  EXPECT_EQ(cfg.pipeline.learning.temperature, 0.5);
  EXPECT_EQ(cfg.pipeline.reward.negative_keywords, (std::vector<std::string>{"bad", "worse"}));
  EXPECT_EQ(cfg.pipeline.gate.fixed, 1.0);
  EXPECT_TRUE(cfg.shared_store);
  EXPECT_EQ(cfg.out_dir, "/tmp/x");
  apply_config(cfg, {{"gate.fixed", "none"}});
  EXPECT_FALSE(cfg.pipeline.gate.fixed.has_value());
}

TEST(ConfigEnv, PrefixedVariablesOnly) {
  const char* env[] = {"PATH=/bin", "PREFVEC_LEARNING__ETA_LONG=0.02", "PREFVEC_BROKEN=1",
                       "PREFVEC_RUN__SEED=5", nullptr};
  const auto kv = env_overrides(env);
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("learning.eta_long"), "0.02");
  EXPECT_EQ(kv.at("run.seed"), "5");
  EXPECT_TRUE(env_overrides(nullptr).empty());
}

TEST(ConfigCanonical, RoundTripAndFingerprint) {
  RunConfig a;
  apply_config(a, {{"learning.eta_short", "0.1"}, {"reward.positive_keywords", "ok,fine"}});
  RunConfig b;
  apply_config(b, parse_config_text(canonical_text(a)));
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  EXPECT_EQ(fingerprint(a).size(), 16u);
  EXPECT_EQ(fingerprint(a), sha1_hex(canonical_text(a)).substr(0, 16));

  RunConfig c = a;
  c.out_dir = "elsewhere";
  EXPECT_EQ(fingerprint(a), fingerprint(c));
  apply_config(c, {{"run.seed", "8"}});
  EXPECT_NE(fingerprint(a), fingerprint(c));
  EXPECT_EQ(to_key_values(RunConfig{}).count("run.out"), 0u);
}

TEST(ConfigCanonical, FileRoundTrip) {
  fixture::TempDir dir("cfg");
  RunConfig a;
  apply_config(a, {{"simulator.noise_rate", "0.3"}});
  const auto path = dir.path() / "c.cfg";
  std::ofstream(path) << canonical_text(a);
  RunConfig b;
  apply_config(b, read_config_file(path));
  EXPECT_EQ(b.pipeline.script.noise_rate, 0.3);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  for (double v : {1.0 / 3.0, 1e-300, 123456.789, -0.0625}) EXPECT_EQ(std::stod(format_double(v)), v);
}
