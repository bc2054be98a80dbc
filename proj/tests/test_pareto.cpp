#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sacnn/pareto.hpp"
#include "sacnn/random.hpp"

using namespace sacnn;

namespace {

ArchiveEntry entry(double e, std::uint64_t f, std::size_t id) {
  return {Configuration({id}), {e, f}, id};
}

// Independent brute-force front: keep every point no other point beats.
std::set<std::pair<double, std::uint64_t>>
brute_force_front(const std::vector<std::pair<double, std::uint64_t>> &pts) {
  std::set<std::pair<double, std::uint64_t>> out;
  for (const auto &p : pts) {
    bool beaten = false;
    for (const auto &q : pts) {
      const bool no_worse = q.first <= p.first && q.second <= p.second;
      const bool better = q.first < p.first || q.second < p.second;
      if (no_worse && better) {
        beaten = true;
        break;
      }
    }
    if (!beaten)
      out.insert(p);
  }
  return out;
}

std::set<std::pair<double, std::uint64_t>> values_of(const ParetoArchive &a) {
  std::set<std::pair<double, std::uint64_t>> out;
  for (const auto &e : a.entries())
    out.insert({e.objectives.error_rate, e.objectives.flops});
  return out;
}

} // namespace

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates({0.1, 100}, {0.2, 200}));
  EXPECT_FALSE(dominates({0.1, 200}, {0.2, 100}));
  EXPECT_FALSE(dominates({0.2, 100}, {0.1, 200}));
  EXPECT_FALSE(dominates({0.1, 100}, {0.1, 100}));
  EXPECT_TRUE(dominates({0.1, 100}, {0.1, 101}));
}

TEST(Dominates, StrictPartialOrderProperties) {
  Rng rng(40);
  std::vector<ObjectiveVector> v;
  for (int i = 0; i < 60; ++i)
    v.push_back({static_cast<double>(rng.uniform_index(5)) / 4.0, rng.uniform_index(5)});
  for (const auto &a : v) {
    EXPECT_FALSE(dominates(a, a));
    for (const auto &b : v) {
      if (dominates(a, b)) {
        EXPECT_FALSE(dominates(b, a));
      }
      for (const auto &c : v) {
        if (dominates(a, b) && dominates(b, c)) {
          EXPECT_TRUE(dominates(a, c));
        }
      }
    }
  }
}

TEST(ObjectiveVector, ValidateRange) {
  EXPECT_NO_THROW(validate(ObjectiveVector{0.0, 0}));
  EXPECT_NO_THROW(validate(ObjectiveVector{1.0, 5}));
  EXPECT_THROW(validate(ObjectiveVector{1.5, 5}), EvaluationError);
  EXPECT_THROW(validate(ObjectiveVector{-0.1, 5}), EvaluationError);
  EXPECT_THROW(validate(ObjectiveVector{std::nan(""), 5}), EvaluationError);
}

TEST(Archive, InsertIntoEmpty) {
  ParetoArchive a;
  EXPECT_EQ(a.insert(entry(0.5, 500, 0)), InsertResult::Added);
  EXPECT_EQ(a.size(), 1u);
}

TEST(Archive, RejectsDominated) {
  ParetoArchive a;
  a.insert(entry(0.1, 100, 0));
  EXPECT_EQ(a.insert(entry(0.2, 200, 1)), InsertResult::RejectedDominated);
  EXPECT_EQ(a.size(), 1u);
}

TEST(Archive, DominatingCandidateEvictsAll) {
  ParetoArchive a;
  a.insert(entry(0.1, 300, 0));
  a.insert(entry(0.3, 100, 1));
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.insert(entry(0.05, 50, 2)), InsertResult::Added);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.entries().front().objectives, (ObjectiveVector{0.05, 50}));
}

TEST(Archive, SameConfigurationIsNotStoredTwice) {
  ParetoArchive a;
  a.insert(entry(0.2, 200, 7));
  EXPECT_EQ(a.insert(entry(0.2, 200, 7)), InsertResult::RejectedDominated);
  EXPECT_EQ(a.size(), 1u);
}

TEST(Archive, EqualObjectivesDifferentConfigsCoexist) {
  ParetoArchive a;
  a.insert(entry(0.2, 200, 1));
  EXPECT_EQ(a.insert(entry(0.2, 200, 2)), InsertResult::Added);
  EXPECT_EQ(a.size(), 2u);
}

TEST(Archive, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    ParetoArchive a;
    std::vector<std::pair<double, std::uint64_t>> offered;
    for (std::size_t i = 0; i < 200; ++i) {
      // Coarse grid so ties and duplicates actually happen.
      const double e = static_cast<double>(rng.uniform_index(21)) / 20.0;
      const std::uint64_t f = 1000 * rng.uniform_index(30);
      offered.push_back({e, f});
      a.insert(entry(e, f, i));
    }
    EXPECT_EQ(values_of(a), brute_force_front(offered)) << "seed " << seed;
    for (const auto &x : a.entries())
      for (const auto &y : a.entries())
        EXPECT_FALSE(dominates(x.objectives, y.objectives));
  }
}

TEST(ScalarDeterioration, Examples) {
  EXPECT_DOUBLE_EQ(scalar_deterioration({0.2, 1000}, {0.2, 1000}, 10000), 0.0);
  EXPECT_NEAR(scalar_deterioration({0.2, 0}, {0.4, 0}, 10000), 0.1, 1e-12);
  EXPECT_NEAR(scalar_deterioration({0.2, 0}, {0.4, 0}, 7), 0.1, 1e-12);
  // ½(0.1 + 1000/10000)
  EXPECT_NEAR(scalar_deterioration({0.2, 1000}, {0.3, 2000}, 10000), 0.1, 1e-12);
  EXPECT_THROW(scalar_deterioration({0.2, 0}, {0.4, 0}, 0), ConfigError);
}

TEST(ScalarDeterioration, AntisymmetricAndDominanceImpliesNegative) {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const ObjectiveVector a{rng.uniform01(), rng.uniform_index(100000)};
    const ObjectiveVector b{rng.uniform01(), rng.uniform_index(100000)};
    EXPECT_NEAR(scalar_deterioration(a, b, 100000), -scalar_deterioration(b, a, 100000), 1e-15);
    if (dominates(b, a)) {
      EXPECT_LT(scalar_deterioration(a, b, 100000), 0.0);
    }
  }
}

TEST(Front, SortedByErrorRate) {
  ParetoArchive a;
  EXPECT_TRUE(front(a).empty());
  a.insert(entry(0.3, 100, 0));
  a.insert(entry(0.1, 900, 1));
  const auto f = front(a);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].objectives, (ObjectiveVector{0.1, 900}));
  EXPECT_EQ(f[1].objectives, (ObjectiveVector{0.3, 100}));
}

TEST(ExhaustiveFront, KeepsOnlyNonDominated) {
  std::vector<ArchiveEntry> pts{entry(0.1, 300, 0), entry(0.3, 100, 1), entry(0.2, 400, 2),
                                entry(0.1, 300, 0)};
  const auto f = exhaustive_front(pts);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].config, Configuration({0}));
  EXPECT_EQ(f[1].config, Configuration({1}));
}
