#include <gtest/gtest.h>

#include <set>

#include "sacnn/annealer.hpp"
#include "sacnn/flops.hpp"
#include "sacnn/synthetic.hpp"

using namespace sacnn;

namespace {

// Counts one multiply and one add per weight touched, loop by loop.
std::uint64_t hand_count(const std::array<std::uint64_t, 3> &filters, std::uint64_t units,
                         std::uint64_t n, std::uint64_t k, std::uint64_t classes) {
  std::uint64_t ops = 0;
  const std::uint64_t windows[3] = {3, 4, 5};
  for (int wi = 0; wi < 3; ++wi)
    for (std::uint64_t f = 0; f < filters[wi]; ++f)
      for (std::uint64_t pos = 0; pos + windows[wi] <= n; ++pos)
        for (std::uint64_t j = 0; j < windows[wi] * k; ++j)
          ops += 2;
  const std::uint64_t features = filters[0] + filters[1] + filters[2];
  for (std::uint64_t i = 0; i < features; ++i)
    for (std::uint64_t u = 0; u < units; ++u)
      ops += 2;
  for (std::uint64_t u = 0; u < units; ++u)
    for (std::uint64_t c = 0; c < classes; ++c)
      ops += 2;
  return ops;
}

Configuration top1(const SearchSpace &s) {
  return configuration_from_assignments(
      s, {{"kernelCount3", "100"}, {"kernelCount4", "64"}, {"kernelCount5", "32"},
          {"convDropoutRate", "0.5"}, {"unitCount", "64"}, {"fcDropoutRate", "0.5"},
          {"activation", "relu"}, {"learningRate", "0.001"}, {"batchSize", "64"}});
}

} // namespace

TEST(Flops, SingleDotProduct) {
  // f = 1, w = n, k = 1: one dot product of length n.
  for (std::uint64_t n : {3u, 4u, 9u})
    EXPECT_EQ(conv_flops(1, n, n, 1), 2 * n);
  EXPECT_THROW(conv_flops(1, 6, 5, 1), ConfigError);
}

TEST(Flops, TableTop1Configuration) {
  const auto s = default_search_space();
  const auto b = estimate_flops(s, top1(s), {10, 50, 6});
  const std::uint64_t expected = hand_count({100, 64, 32}, 64, 10, 50, 6);
  EXPECT_EQ(expected, 541056u);
  EXPECT_EQ(b.total, expected);
  EXPECT_EQ(b.conv_flops, (std::vector<std::uint64_t>{240000, 179200, 96000}));
  EXPECT_EQ(b.fc_flops, 25856u);
}

TEST(Flops, MatchesHandCountEverywhere) {
  const auto s = default_search_space();
  Rng rng(40);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_configuration(s, rng);
    const auto a = architecture_of(s, c);
    const InputShape shape{5 + rng.uniform_index(20), 1 + rng.uniform_index(8),
                           2 + rng.uniform_index(5)};
    EXPECT_EQ(estimate_flops(s, c, shape).total,
              hand_count({a.filters[0], a.filters[1], a.filters[2]}, a.units,
                         shape.sentence_length, shape.embedding_dim, shape.class_count));
  }
}

TEST(Flops, LinearInFilterCounts) {
  const InputShape shape{12, 50, 2};
  Architecture a;
  a.filters = {32, 64, 96};
  a.units = 64;
  Architecture twice = a;
  for (auto &f : twice.filters)
    f *= 2;
  const auto b1 = estimate_flops(a, shape);
  const auto b2 = estimate_flops(twice, shape);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(b2.conv_flops[i], 2 * b1.conv_flops[i]);
}

TEST(Flops, MonotoneInEveryCount) {
  const auto s = default_search_space();
  const InputShape shape{20, 50, 2};
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_configuration(s, rng);
    const auto base = estimate_flops(s, c, shape).total;
    for (auto name : {"kernelCount3", "kernelCount4", "kernelCount5", "unitCount"}) {
      const auto d = *s.index_of(name);
      const auto &values = s[d].values();
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (values[v].as_int() < values[c[d]].as_int())
          continue;
        auto bigger = c;
        bigger.set(d, v);
        EXPECT_GE(estimate_flops(s, bigger, shape).total, base);
      }
    }
  }
}

TEST(Flops, MaximumBoundsEveryConfiguration) {
  const auto s = default_search_space();
  const InputShape shape{20, 50, 2};
  const auto top = max_flops(s, shape);
  Rng rng(1);
  for (int i = 0; i < 500; ++i)
    EXPECT_LE(estimate_flops(s, random_configuration(s, rng), shape).total, top);
  EXPECT_EQ(top, hand_count({256, 256, 256}, 512, 20, 50, 2));
}

TEST(Synthetic, SphereProxyExtremes) {
  const auto s = default_search_space();
  Configuration first(std::vector<std::size_t>(s.size(), 0));
  std::vector<std::size_t> last_idx;
  for (const auto &d : s.domains())
    last_idx.push_back(d.size() - 1);
  EXPECT_DOUBLE_EQ(evaluate_synthetic("sphere_proxy", s, first).error_rate, 0.0);
  EXPECT_DOUBLE_EQ(evaluate_synthetic("sphere_proxy", s, Configuration(last_idx)).error_rate, 1.0);
}

TEST(Synthetic, DeceptiveTrapShape) {
  const auto s = restrict_space(default_search_space(), {{"batchSize", {"64", "128", "256"}}});
  auto at = [&](std::size_t i) {
    Configuration c(std::vector<std::size_t>(s.size(), 0));
    c.set(*s.index_of("batchSize"), i);
    return synthetic_error_rate(SyntheticObjective::DeceptiveTrap, s, c);
  };
  EXPECT_DOUBLE_EQ(at(0), 0.2);
  EXPECT_DOUBLE_EQ(at(1), 0.2 + 0.75 * 0.5);
  EXPECT_DOUBLE_EQ(at(2), 0.0);
}

TEST(Synthetic, PureAndInRange) {
  const auto s = default_search_space();
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto c = random_configuration(s, rng);
    for (auto kind : {SyntheticObjective::SphereProxy, SyntheticObjective::DeceptiveTrap}) {
      const auto a = evaluate_synthetic(kind, s, c, {});
      const auto b = evaluate_synthetic(kind, s, c, {});
      EXPECT_EQ(a, b);
      EXPECT_GE(a.error_rate, 0.0);
      EXPECT_LE(a.error_rate, 1.0);
    }
  }
  EXPECT_THROW(parse_synthetic_objective("rastrigin"), ConfigError);
}

TEST(Synthetic, ThreeDomainOracleMatchesLongRun) {
  const auto s = restrict_space(default_search_space(),
                                {{"kernelCount4", {"256", "128", "64", "32"}},
                                 {"unitCount", {"512", "128", "32"}},
                                 {"convDropoutRate", {"0.1", "0.3", "0.5"}}});
  std::vector<ArchiveEntry> all;
  for (const auto &c : enumerate(s, 100))
    all.push_back({c, evaluate_synthetic(SyntheticObjective::SphereProxy, s, c, {}), 0});
  const auto oracle = exhaustive_front(all);
  ASSERT_GT(oracle.size(), 1u);
  for (const auto &o : oracle)
    for (const auto &p : all)
      EXPECT_FALSE(dominates(p.objectives, o.objectives));

  SyntheticEvaluator eval(s, SyntheticObjective::SphereProxy);
  AnnealerSettings settings;
  settings.iteration_budget = 1000;
  settings.cooling_rate = 0.99;
  const auto r = run(s, settings, eval);
  std::set<Configuration> got, want;
  for (const auto &e : r.archive.entries())
    got.insert(e.config);
  for (const auto &e : oracle)
    want.insert(e.config);
  EXPECT_EQ(got, want);
}
