#include <gtest/gtest.h>

#include <map>
#include <set>

#include "sacnn/search_space.hpp"

using namespace sacnn;

namespace {

SearchSpace two_by_two() {
  return SearchSpace({ParamDomain("a", parse_values({"1", "2"})),
                      ParamDomain("b", parse_values({"x", "y"}))});
}

std::size_t hamming(const Configuration &a, const Configuration &b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += a[i] != b[i];
  return d;
}

} // namespace

TEST(Value, ParsesKinds) {
  EXPECT_EQ(Value::parse("64").as_int(), 64);
  EXPECT_DOUBLE_EQ(Value::parse("0.0005").as_double(), 0.0005);
  EXPECT_EQ(Value::parse("relu").text(), "relu");
  EXPECT_THROW(Value::parse("relu").as_double(), ConfigError);
  EXPECT_THROW(Value::parse(""), ConfigError);
}

TEST(ParamDomain, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(ParamDomain("a", {}), ConfigError);
  EXPECT_THROW(ParamDomain("a", parse_values({"1", "1"})), ConfigError);
}

TEST(SearchSpace, RejectsDuplicateNames) {
  EXPECT_THROW(SearchSpace({ParamDomain("a", parse_values({"1"})),
                            ParamDomain("a", parse_values({"2"}))}),
               ConfigError);
}

TEST(SearchSpace, SingletonIsNotSearchable) {
  SearchSpace s({ParamDomain("a", parse_values({"1"}))});
  EXPECT_EQ(s.cardinality(), 1u);
  EXPECT_THROW(s.require_searchable(), ConfigError);
  EXPECT_NO_THROW(two_by_two().require_searchable());
}

TEST(DefaultSpace, MatchesPublishedRanges) {
  const auto s = default_search_space();
  EXPECT_EQ(s.size(), 9u);
  EXPECT_EQ(s.domain("activation").size(), 5u);
  EXPECT_EQ(s.domain("learningRate").size(), 10u);
  EXPECT_EQ(s.domain("kernelCount3").size(), 7u);
  EXPECT_EQ(s.domain("batchSize").size(), 3u);
  EXPECT_EQ(s.cardinality(), 7u * 7u * 7u * 5u * 6u * 5u * 5u * 10u * 3u);
  EXPECT_EQ(s.cardinality(), 7717500u);
  std::set<std::string> acts;
  for (const auto &v : s.domain("activation").values())
    acts.insert(v.text());
  EXPECT_EQ(acts, (std::set<std::string>{"relu", "leaky_relu", "elu", "tanh", "linear"}));
}

TEST(Configuration, AssignmentsRoundTrip) {
  const auto s = default_search_space();
  std::map<std::string, std::string> values{
      {"kernelCount3", "100"}, {"kernelCount4", "64"},   {"kernelCount5", "32"},
      {"convDropoutRate", "0.5"}, {"unitCount", "64"},   {"fcDropoutRate", "0.2"},
      {"activation", "tanh"},  {"learningRate", "0.001"}, {"batchSize", "64"}};
  const auto c = configuration_from_assignments(s, values);
  EXPECT_EQ(assignments_of(s, c), values);
  EXPECT_EQ(value_of(s, c, "activation").text(), "tanh");
}

TEST(Configuration, AcceptsNumericallyEqualSpelling) {
  const auto s = two_by_two();
  const auto c = configuration_from_assignments(s, {{"a", "2.0"}, {"b", "y"}});
  EXPECT_EQ(c[0], 1u);
}

TEST(Configuration, RejectsGapsExtrasAndForeignValues) {
  const auto s = two_by_two();
  EXPECT_THROW(configuration_from_assignments(s, {{"a", "1"}}), ConfigError);
  EXPECT_THROW(configuration_from_assignments(s, {{"a", "1"}, {"b", "x"}, {"c", "1"}}),
               ConfigError);
  EXPECT_THROW(configuration_from_assignments(s, {{"a", "3"}, {"b", "x"}}), ConfigError);
  EXPECT_THROW(validate(s, Configuration({0, 2})), ConfigError);
  EXPECT_THROW(validate(s, Configuration({0})), ConfigError);
}

TEST(RandomConfiguration, SingletonSpace) {
  SearchSpace s({ParamDomain("a", parse_values({"1"}))});
  Rng rng(1);
  EXPECT_EQ(random_configuration(s, rng), Configuration({0}));
}

TEST(RandomConfiguration, SameSeedSameDraw) {
  const auto s = default_search_space();
  Rng a(40), b(40);
  for (int i = 0; i < 50; ++i)
    EXPECT_EQ(random_configuration(s, a), random_configuration(s, b));
}

TEST(RandomConfiguration, BatchSizeIsUniform) {
  const auto s = default_search_space();
  const auto d = *s.index_of("batchSize");
  Rng rng(40);
  std::array<int, 3> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    ++counts[random_configuration(s, rng)[d]];
  for (int c : counts)
    EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 3.0, 0.02);
}

TEST(Neighbor, OnlyOneMutableDomain) {
  SearchSpace s({ParamDomain("a", parse_values({"1", "2"})),
                 ParamDomain("b", parse_values({"x"}))});
  Rng rng(3);
  const auto c = configuration_from_assignments(s, {{"a", "1"}, {"b", "x"}});
  const auto n = neighbor(c, s, rng);
  EXPECT_EQ(assignments_of(s, n), (std::map<std::string, std::string>{{"a", "2"}, {"b", "x"}}));
}

TEST(Neighbor, HammingDistanceOneProperty) {
  const auto s = default_search_space();
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto c = random_configuration(s, rng);
    const auto n = neighbor(c, s, rng);
    EXPECT_NO_THROW(validate(s, n));
    EXPECT_EQ(hamming(c, n), 1u);
  }
}

TEST(Neighbor, DomainsMutatedUniformly) {
  const auto s = default_search_space();
  Rng rng(40);
  Rng start_rng(5);
  const auto c = random_configuration(s, start_rng);
  std::vector<int> counts(s.size(), 0);
  const int calls = 10000;
  for (int i = 0; i < calls; ++i) {
    const auto n = neighbor(c, s, rng);
    for (std::size_t d = 0; d < s.size(); ++d)
      if (n[d] != c[d])
        ++counts[d];
  }
  for (int k : counts)
    EXPECT_NEAR(static_cast<double>(k) / calls, 1.0 / 9.0, 0.02);
}

TEST(Neighbor, ReplayIsBitEqual) {
  const auto s = default_search_space();
  Rng a(77), b(77);
  auto ca = random_configuration(s, a);
  auto cb = random_configuration(s, b);
  for (int i = 0; i < 100; ++i) {
    ca = neighbor(ca, s, a);
    cb = neighbor(cb, s, b);
    ASSERT_EQ(ca, cb);
  }
  EXPECT_TRUE(a == b);
}

TEST(Neighbor, NeedsAMutableDomain) {
  SearchSpace s({ParamDomain("a", parse_values({"1"}))});
  Rng rng(1);
  EXPECT_THROW(neighbor(Configuration({0}), s, rng), ConfigError);
}

TEST(Enumerate, ProductSpace) {
  const auto all = enumerate(two_by_two(), 100);
  EXPECT_EQ(all.size(), 4u);
  EXPECT_EQ(std::set<Configuration>(all.begin(), all.end()).size(), 4u);
}

TEST(Enumerate, Singleton) {
  SearchSpace s({ParamDomain("a", parse_values({"1"}))});
  EXPECT_EQ(enumerate(s, 10), std::vector<Configuration>{Configuration({0})});
}

TEST(Enumerate, CapExceeded) {
  EXPECT_THROW(enumerate(default_search_space(), 1000000), ConfigError);
}

TEST(Enumerate, CountEqualsCardinality) {
  const auto s = restrict_space(default_search_space(),
                                {{"kernelCount3", {"32", "64", "96"}},
                                 {"activation", {"relu", "tanh"}},
                                 {"batchSize", {"64", "128", "256"}}});
  const auto all = enumerate(s, 1000);
  EXPECT_EQ(all.size(), s.cardinality());
  EXPECT_EQ(std::set<Configuration>(all.begin(), all.end()).size(), 18u);
}

TEST(RestrictSpace, PinsUnlistedDomains) {
  const auto base = default_search_space();
  const auto s = restrict_space(base, {{"unitCount", {"64", "16"}}});
  EXPECT_EQ(s.size(), base.size());
  EXPECT_EQ(s.cardinality(), 2u);
  EXPECT_EQ(s.domain("unitCount").values()[0].text(), "64");
  EXPECT_EQ(s.domain("kernelCount3").size(), 1u);
  EXPECT_THROW(restrict_space(base, {{"unitCount", {"17"}}}), ConfigError);
  EXPECT_THROW(restrict_space(base, {{"nope", {"1"}}}), ConfigError);
}
