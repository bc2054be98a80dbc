#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sacnn/corpus.hpp"

using namespace sacnn;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("sacnn-corpus-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path write(const std::string &name, const std::string &content) const {
    std::ofstream(path_ / name, std::ios::binary) << content;
    return path_ / name;
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

Dataset mixed(std::size_t first, std::size_t second) {
  Dataset d;
  d.class_names = {"a", "b"};
  for (std::size_t i = 0; i < first + second; ++i)
    d.sentences.push_back({{"t" + std::to_string(i % 7), "x"}, i < first ? 0u : 1u});
  return d;
}

// Bag-of-words perceptron; returns final train accuracy.
double perceptron_accuracy(const Dataset &d, int epochs) {
  std::map<std::string, std::size_t> index;
  for (const auto &s : d.sentences)
    for (const auto &t : s.tokens)
      index.emplace(t, index.size());
  std::vector<double> w(index.size() + 1, 0.0);
  auto score = [&](const LabeledSentence &s) {
    double z = w.back();
    for (const auto &t : s.tokens)
      z += w[index[t]];
    return z;
  };
  for (int e = 0; e < epochs; ++e) {
    bool clean = true;
    for (const auto &s : d.sentences) {
      const double y = s.label == 1 ? 1.0 : -1.0;
      if (y * score(s) <= 0.0) {
        clean = false;
        for (const auto &t : s.tokens)
          w[index[t]] += y;
        w.back() += y;
      }
    }
    if (clean)
      break;
  }
  std::size_t right = 0;
  for (const auto &s : d.sentences)
    right += (score(s) > 0.0) == (s.label == 1);
  return static_cast<double>(right) / static_cast<double>(d.sentences.size());
}

} // namespace

TEST(Tokenize, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(tokenize("What is Australia's national flower?"),
            (std::vector<std::string>{"what", "is", "australia", "'", "s", "national", "flower",
                                      "?"}));
  EXPECT_EQ(tokenize("  a\tb\x01  c  "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(LoadMr, TwoLineFixture) {
  TempDir dir;
  const auto d = load_mr(dir.write("pos", "a fine film .\n"), dir.write("neg", "dull .\n"));
  ASSERT_EQ(d.sentences.size(), 2u);
  EXPECT_EQ(d.class_names.size(), 2u);
  std::multiset<std::size_t> labels;
  for (const auto &s : d.sentences)
    labels.insert(s.label);
  EXPECT_EQ(labels, (std::multiset<std::size_t>{0, 1}));
  EXPECT_EQ(d.sentences.front().label, 1u);
}

TEST(LoadMr, MissingFileIsDataError) {
  TempDir dir;
  EXPECT_THROW(load_mr(dir.path() / "nope", dir.path() / "nope2"), DataError);
}

TEST(LoadCr, Fixture) {
  TempDir dir;
  const auto d = load_cr(dir.write("cr", "1\tthis camera is so easy to use !\n0\tbattery died\n"
                                         "1\tgreat\n0\tawful screen\n"));
  ASSERT_EQ(d.sentences.size(), 4u);
  EXPECT_EQ(d.class_names[d.sentences[0].label], "positive");
  EXPECT_THROW(load_cr(dir.write("bad", "2\tx\n")), DataError);
}

TEST(LoadTrec, LabelAndClassOrder) {
  TempDir dir;
  const auto d = load_trec(dir.write("trec", "LOC:other What is Australia's national flower ?\n"
                                             "NUM:date When was it ?\n"));
  ASSERT_EQ(d.sentences.size(), 2u);
  EXPECT_EQ(d.class_names[d.sentences[0].label], "LOC");
  EXPECT_EQ(d.sentences[0].tokens.front(), "what");
  EXPECT_EQ(d.class_names,
            (std::vector<std::string>{"ABBR", "DESC", "ENTY", "HUM", "LOC", "NUM"}));
}

TEST(LoadTrec, OneLinePerClassAndFixedTest) {
  TempDir dir;
  const auto train = dir.write("train", "ABBR:exp a ?\nDESC:def b ?\nENTY:animal c ?\n"
                                        "HUM:ind d ?\nLOC:city e ?\nNUM:count f ?\n");
  const auto test = dir.write("test", "HUM:ind who ?\n");
  const auto d = load_trec(train, test);
  EXPECT_EQ(d.class_names.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i)
    EXPECT_EQ(d.sentences[i].label, i);
  ASSERT_EQ(d.fixed_test.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<FixedTest>(default_policy(d, 0)));
  EXPECT_THROW(load_trec(dir.write("bad", "XYZ:foo q ?\n")), DataError);
}

TEST(SyntheticCorpus, CountsAndDeterminism) {
  const auto d = synthetic_corpus(2, 50, 40, 40);
  EXPECT_EQ(d.sentences.size(), 100u);
  EXPECT_EQ(d.class_names.size(), 2u);
  EXPECT_EQ(d.sentences, synthetic_corpus(2, 50, 40, 40).sentences);
  EXPECT_NE(d.sentences, synthetic_corpus(2, 50, 40, 41).sentences);
}

TEST(SyntheticCorpus, PerceptronSeparates) {
  EXPECT_DOUBLE_EQ(perceptron_accuracy(synthetic_corpus(2, 50, 40, 40), 1000), 1.0);
}

TEST(MakeSplits, CrossValidationSizes) {
  const auto p = make_splits(mixed(50, 50), CrossValidation{10, 0}, 0.9, 40);
  EXPECT_EQ(p.test.size(), 10u);
  EXPECT_EQ(p.train.size(), 81u);
  EXPECT_EQ(p.validation.size(), 9u);
  EXPECT_EQ(p.stats.dataset_size, 100u);
}

TEST(MakeSplits, FoldsPartitionTheData) {
  const Dataset d = mixed(33, 20);
  Rng rng(40);
  const auto folds = detail::stratified_folds(d.sentences, 2, 10, rng);
  std::vector<int> hits(d.sentences.size(), 0);
  for (const auto &f : folds) {
    EXPECT_GE(f.size(), 5u);
    EXPECT_LE(f.size(), 6u);
    for (auto i : f)
      ++hits[i];
  }
  for (int h : hits)
    EXPECT_EQ(h, 1);
  for (std::size_t fold = 0; fold < 10; ++fold) {
    const auto p = make_splits(d, CrossValidation{10, fold}, 0.9, 40);
    EXPECT_EQ(p.test.size(), folds[fold].size());
    EXPECT_EQ(p.train.size() + p.validation.size() + p.test.size(), 53u);
  }
}

TEST(MakeSplits, StratifiedWithinTwoItems) {
  for (std::uint64_t seed : {1u, 40u, 77u}) {
    const auto p = make_splits(mixed(60, 40), Holdout{0.2}, 0.9, seed);
    for (const auto *split : {&p.train, &p.validation, &p.test}) {
      std::size_t first = 0;
      for (const auto &e : *split)
        first += e.label == 0;
      const double expected = 0.6 * static_cast<double>(split->size());
      EXPECT_NEAR(static_cast<double>(first), expected, 2.0);
    }
  }
}

TEST(MakeSplits, IdsStayInsideVocabulary) {
  const auto p = make_splits(synthetic_corpus(3, 30, 60, 5), CrossValidation{10, 3}, 0.9, 5);
  EXPECT_NE(kPadId, kUnknownId);
  for (const auto *split : {&p.train, &p.validation, &p.test})
    for (const auto &e : *split) {
      EXPECT_EQ(e.ids.size(), p.sentence_length);
      for (auto id : e.ids) {
        EXPECT_GE(id, 0);
        EXPECT_LT(static_cast<std::size_t>(id), p.vocab_size());
      }
    }
  EXPECT_GE(p.sentence_length, kMinSentenceLength);
}

TEST(MakeSplits, FixedTestKeepsTestList) {
  Dataset d = mixed(20, 20);
  d.fixed_test = {{{"zzz"}, 0u}, {{"t1"}, 1u}};
  const auto p = make_splits(d, FixedTest{}, 0.9, 1);
  EXPECT_EQ(p.test.size(), 2u);
  EXPECT_EQ(p.train.size() + p.validation.size(), 40u);
  EXPECT_EQ(p.test[0].ids[0], kUnknownId);
}

TEST(MakeSplits, Errors) {
  EXPECT_THROW(make_splits(Dataset{{"a"}, {}, {}}, CrossValidation{}, 0.9, 1), DataError);
  EXPECT_THROW(make_splits(mixed(5, 5), CrossValidation{10, 10}, 0.9, 1), ConfigError);
  EXPECT_THROW(make_splits(mixed(5, 5), CrossValidation{}, 1.0, 1), ConfigError);
  Dataset missing = mixed(10, 0);
  missing.class_names = {"a", "b"};
  EXPECT_THROW(make_splits(missing, CrossValidation{}, 0.9, 1), DataError);
}

TEST(CorpusCache, RoundTripAndKeyMismatch) {
  const auto p = make_splits(synthetic_corpus(2, 50, 40, 40), CrossValidation{10, 0}, 0.9, 40);
  std::stringstream buf;
  save_corpus(buf, p, "key-1");
  const auto back = load_corpus(buf, "key-1");
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, p);

  std::stringstream again;
  save_corpus(again, p, "key-1");
  EXPECT_FALSE(load_corpus(again, "key-2").has_value());
}

TEST(CorpusCache, KeyTracksInputsAndPolicy) {
  TempDir dir;
  const auto f = dir.write("cr", "1\tgood\n0\tbad\n");
  const auto k1 = corpus_cache_key({f}, CrossValidation{10, 0}, 0.9, 40);
  EXPECT_EQ(k1, corpus_cache_key({f}, CrossValidation{10, 0}, 0.9, 40));
  EXPECT_NE(k1, corpus_cache_key({f}, CrossValidation{10, 1}, 0.9, 40));
  EXPECT_NE(k1, corpus_cache_key({f}, CrossValidation{10, 0}, 0.8, 40));
  dir.write("cr", "1\tgood\n0\tworse\n");
  EXPECT_NE(k1, corpus_cache_key({f}, CrossValidation{10, 0}, 0.9, 40));
}
