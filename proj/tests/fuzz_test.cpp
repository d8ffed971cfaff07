#include <gtest/gtest.h>

#include "wadge/fuzz.hpp"

using namespace wadge;

TEST(Fuzz, CleanRunHasNoFailures) {
  fuzz::Config cfg;
  cfg.iterations = 40;
  const fuzz::Report r = fuzz::run(cfg);
  EXPECT_EQ(r.iterations, 40u);
  for (const auto& f : r.failures) ADD_FAILURE() << f.suite << " seed " << f.seed << ": " << f.detail;
  for (const char* suite : {"term", "flowchart", "translation", "command", "domains", "decide"}) EXPECT_EQ(r.checks.at(suite), 40u);
}

TEST(Fuzz, RunsAreReproducible) {
  fuzz::Config cfg;
  cfg.seed = 17;
  cfg.iterations = 10;
  cfg.mutation = fuzz::Mutation::Monotone;
  const fuzz::Report a = fuzz::run(cfg), b = fuzz::run(cfg);
  ASSERT_EQ(a.failures.size(), b.failures.size());
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    EXPECT_EQ(a.failures[i].seed, b.failures[i].seed);
    EXPECT_EQ(a.failures[i].detail, b.failures[i].detail);
  }
}

TEST(Fuzz, MutationsAreCaught) {
  for (auto m : {fuzz::Mutation::Monotone, fuzz::Mutation::Reduce}) {
    fuzz::Config cfg;
    cfg.iterations = 30;
    cfg.mutation = m;
    const fuzz::Report r = fuzz::run(cfg);
    ASSERT_FALSE(r.ok());
    const std::string want = m == fuzz::Mutation::Monotone ? "monotone" : "reduce";
    for (const auto& f : r.failures) EXPECT_EQ(f.suite, want);
    // a failing seed replays on its own
    cfg.seed = r.failures.front().seed;
    cfg.iterations = 1;
    EXPECT_FALSE(fuzz::run(cfg).ok());
  }
}

TEST(Fuzz, ZeroIterations) {
  fuzz::Config cfg;
  cfg.iterations = 0;
  const fuzz::Report r = fuzz::run(cfg);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_TRUE(r.checks.empty());
}
