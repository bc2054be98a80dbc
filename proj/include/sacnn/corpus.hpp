#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <locale>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sacnn/error.hpp"
#include "sacnn/random.hpp"

namespace sacnn {

inline constexpr std::uint32_t kTokenizerVersion = 1;
inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnknownId = 1;
inline constexpr std::size_t kMinSentenceLength = 5;

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::size_t label = 0;

  bool operator==(const LabeledSentence &) const = default;
};

/// Loaded sentences plus, for datasets that ship one, a fixed test split.
struct Dataset {
  std::vector<std::string> class_names;
  std::vector<LabeledSentence> sentences;
  std::vector<LabeledSentence> fixed_test;
};

/// Lowercase ASCII, control characters become whitespace, every ASCII
/// punctuation character is its own token. Non-ASCII bytes are kept.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty())
      out.push_back(std::move(cur));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (c < 0x20 || c == 0x7f || c == ' ') {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, static_cast<char>(c));
    } else {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  flush();
  return out;
}

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return c <= 0x20 || c == 0x7f; });
}

} // namespace detail

/// Movie reviews: one sentence per line, positive file -> 1, negative -> 0.
inline Dataset load_mr(const std::filesystem::path &pos_path,
                       const std::filesystem::path &neg_path) {
  Dataset ds;
  ds.class_names = {"negative", "positive"};
  for (auto [path, label] : {std::pair{pos_path, std::size_t{1}}, std::pair{neg_path, std::size_t{0}}}) {
    std::size_t count = 0;
    for (const auto &line : detail::read_lines(path)) {
      auto tokens = tokenize(line);
      if (tokens.empty())
        continue;
      ds.sentences.push_back({std::move(tokens), label});
      ++count;
    }
    if (count == 0)
      throw DataError("'" + path.string() + "' contains no sentences");
  }
  return ds;
}

/// Customer reviews: "label<TAB>text" per line, label in {0, 1}.
inline Dataset load_cr(const std::filesystem::path &path) {
  Dataset ds;
  ds.class_names = {"negative", "positive"};
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (detail::blank(line))
      continue;
    const auto tab = line.find('\t');
    const std::string label = line.substr(0, tab);
    if (tab == std::string::npos || (label != "0" && label != "1"))
      throw DataError(path.string() + ":" + std::to_string(i + 1) +
                      ": expected '0<TAB>text' or '1<TAB>text'");
    auto tokens = tokenize(std::string_view(line).substr(tab + 1));
    if (tokens.empty())
      continue;
    ds.sentences.push_back({std::move(tokens), label == "1" ? 1u : 0u});
  }
  if (ds.sentences.empty())
    throw DataError("'" + path.string() + "' contains no sentences");
  return ds;
}

inline const std::vector<std::string> &trec_classes() {
  static const std::vector<std::string> names{"ABBR", "DESC", "ENTY", "HUM", "LOC", "NUM"};
  return names;
}

namespace detail {

inline std::vector<LabeledSentence> load_trec_file(const std::filesystem::path &path) {
  std::vector<LabeledSentence> out;
  const auto lines = read_lines(path);
  const auto &names = trec_classes();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto &line = lines[i];
    if (blank(line))
      continue;
    const auto colon = line.find(':');
    const auto space = line.find(' ');
    if (colon == std::string::npos || (space != std::string::npos && space < colon))
      throw DataError(path.string() + ":" + std::to_string(i + 1) +
                      ": expected 'COARSE:fine question'");
    const std::string coarse = line.substr(0, colon);
    const auto it = std::find(names.begin(), names.end(), coarse);
    if (it == names.end())
      throw DataError(path.string() + ":" + std::to_string(i + 1) +
                      ": unknown coarse label '" + coarse + "'");
    const std::string_view text =
        space == std::string::npos ? std::string_view{} : std::string_view(line).substr(space + 1);
    auto tokens = tokenize(text);
    if (tokens.empty())
      throw DataError(path.string() + ":" + std::to_string(i + 1) + ": empty question");
    out.push_back({std::move(tokens), static_cast<std::size_t>(it - names.begin())});
  }
  if (out.empty())
    throw DataError("'" + path.string() + "' contains no questions");
  return out;
}

} // namespace detail

/// Question classification: "COARSE:fine question text"; the six coarse
/// labels are the classes. The test file, if given, is the held-out split.
inline Dataset load_trec(const std::filesystem::path &train_path,
                         const std::optional<std::filesystem::path> &test_path = std::nullopt) {
  Dataset ds;
  ds.class_names = trec_classes();
  ds.sentences = detail::load_trec_file(train_path);
  if (test_path)
    ds.fixed_test = detail::load_trec_file(*test_path);
  return ds;
}

/// Class c owns keywords w[c*K, (c+1)*K), K = vocab/(2C); the rest are
/// shared filler. Every sentence carries at least two of its own class
/// keywords and none of another class, so bag-of-words is separable.
inline Dataset synthetic_corpus(std::size_t class_count, std::size_t samples_per_class,
                                std::size_t vocab_size, std::uint64_t seed) {
  if (class_count < 2 || vocab_size < 2 * class_count)
    throw ConfigError("synthetic corpus needs >= 2 classes and vocab_size >= 2*classes");
  Rng rng(seed);
  const std::size_t keywords = vocab_size / (2 * class_count);
  const std::size_t filler_first = keywords * class_count;
  const std::size_t filler = vocab_size - filler_first;
  auto word = [](std::size_t i) { return "w" + std::to_string(i); };

  Dataset ds;
  for (std::size_t c = 0; c < class_count; ++c)
    ds.class_names.push_back("class" + std::to_string(c));
  for (std::size_t c = 0; c < class_count; ++c) {
    for (std::size_t s = 0; s < samples_per_class; ++s) {
      const std::size_t length = 6 + rng.uniform_index(7);
      const std::size_t own = 2 + rng.uniform_index(2);
      std::vector<std::string> tokens;
      for (std::size_t t = 0; t < length; ++t)
        tokens.push_back(t < own ? word(c * keywords + rng.uniform_index(keywords))
                                 : word(filler_first + rng.uniform_index(filler)));
      rng.shuffle(tokens.begin(), tokens.end());
      ds.sentences.push_back({std::move(tokens), c});
    }
  }
  return ds;
}

/// Loads a dataset by format name: "synthetic" (bundled: 2 classes, 50 per
/// class, 40-word vocabulary), "mr" (path = positive, aux = negative),
/// "cr" (path), "trec" (path = train, aux = optional test).
inline Dataset load_dataset(std::string_view format, const std::optional<std::string> &path,
                            const std::optional<std::string> &aux, std::uint64_t seed) {
  if (format == "synthetic")
    return synthetic_corpus(2, 50, 40, seed);
  if (!path)
    throw ConfigError("dataset format '" + std::string(format) + "' needs a path");
  if (format == "mr") {
    if (!aux)
      throw ConfigError("MR needs the positive and the negative file");
    return load_mr(*path, *aux);
  }
  if (format == "cr")
    return load_cr(*path);
  if (format == "trec")
    return aux ? load_trec(*path, std::filesystem::path(*aux)) : load_trec(*path);
  throw ConfigError("unknown dataset format '" + std::string(format) + "'");
}

// ---------------------------------------------------------------------------
// Splits

struct CrossValidation {
  std::size_t folds = 10;
  std::size_t fold_index = 0;
};
struct Holdout {
  double test_fraction = 0.1;
};
/// Use the dataset's own fixed test split.
struct FixedTest {};

using SplitPolicy = std::variant<CrossValidation, Holdout, FixedTest>;

/// 10-fold CV unless the dataset ships its own test split.
inline SplitPolicy default_policy(const Dataset &data, std::size_t cv_fold) {
  if (!data.fixed_test.empty())
    return FixedTest{};
  return CrossValidation{10, cv_fold};
}

inline std::string describe(const SplitPolicy &policy) {
  return std::visit(
      [](const auto &p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        std::ostringstream os;
        os.imbue(std::locale::classic());
        if constexpr (std::is_same_v<P, CrossValidation>)
          os << "cv(" << p.folds << "," << p.fold_index << ")";
        else if constexpr (std::is_same_v<P, Holdout>)
          os << "holdout(" << p.test_fraction << ")";
        else
          os << "fixed_test";
        return os.str();
      },
      policy);
}

struct Example {
  std::vector<std::int32_t> ids; // padded / truncated to sentence_length
  std::size_t label = 0;

  bool operator==(const Example &) const = default;
};

struct CorpusStats {
  std::size_t class_count = 0;
  double average_length = 0.0;
  std::size_t dataset_size = 0;
  std::size_t vocab_size = 0;      // model vocabulary incl. pad and unknown
  std::size_t full_vocab_size = 0; // distinct tokens over every split

  bool operator==(const CorpusStats &) const = default;
};

struct PreparedCorpus {
  std::vector<std::string> vocabulary; // id -> token; [0] pad, [1] unknown
  std::vector<std::string> class_names;
  std::size_t sentence_length = kMinSentenceLength;
  std::vector<Example> train;
  std::vector<Example> validation;
  std::vector<Example> test;
  CorpusStats stats;

  std::size_t vocab_size() const noexcept { return vocabulary.size(); }
  std::size_t class_count() const noexcept { return class_names.size(); }

  bool operator==(const PreparedCorpus &) const = default;
};

namespace detail {

/// Stratified two-way split: `first_total` items go to the first part,
/// apportioned over classes by largest remainder, each class shuffled.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split(const std::vector<std::size_t> &items, const std::vector<LabeledSentence> &data,
                 std::size_t class_count, std::size_t first_total, Rng &rng) {
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (auto i : items)
    by_class.at(data[i].label).push_back(i);
  const double fraction =
      items.empty() ? 0.0 : static_cast<double>(first_total) / static_cast<double>(items.size());
  std::vector<std::size_t> quota(class_count);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_count; ++c) {
    const double exact = fraction * static_cast<double>(by_class[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::stable_sort(remainders.begin(), remainders.end());
  for (std::size_t r = 0; assigned < first_total && r < remainders.size(); ++r) {
    const auto c = remainders[r].second;
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }
  std::vector<std::size_t> first, second;
  for (std::size_t c = 0; c < class_count; ++c) {
    rng.shuffle(by_class[c].begin(), by_class[c].end());
    for (std::size_t k = 0; k < by_class[c].size(); ++k)
      (k < quota[c] ? first : second).push_back(by_class[c][k]);
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {first, second};
}

/// Shuffles each class and deals its members round-robin into `folds`
/// buckets (continuing the deal across classes). Each bucket is sorted.
inline std::vector<std::vector<std::size_t>>
stratified_folds(const std::vector<LabeledSentence> &pool, std::size_t class_count,
                 std::size_t folds, Rng &rng) {
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < pool.size(); ++i)
    by_class[pool[i].label].push_back(i);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t position = 0;
  for (auto &members : by_class) {
    rng.shuffle(members.begin(), members.end());
    for (auto i : members)
      out[position++ % folds].push_back(i);
  }
  for (auto &f : out)
    std::sort(f.begin(), f.end());
  return out;
}

inline std::size_t round_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

} // namespace detail

/// Test split per policy; the remaining original-train part is divided
/// train/validation by ratio_init, stratified by class. The vocabulary comes
/// from the train split only.
inline PreparedCorpus make_splits(const Dataset &data, const SplitPolicy &policy,
                                  double ratio_init, std::uint64_t seed) {
  if (data.sentences.empty())
    throw DataError("dataset is empty");
  if (!(ratio_init > 0.0 && ratio_init < 1.0))
    throw ConfigError("ratio_init must lie in (0,1)");
  const std::size_t classes = data.class_names.size();
  for (const auto &s : data.sentences)
    if (s.label >= classes || s.tokens.empty())
      throw DataError("sentence with invalid label or no tokens");

  Rng rng(seed);
  std::vector<LabeledSentence> pool = data.sentences;
  std::vector<std::size_t> all(pool.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;

  std::vector<std::size_t> original_train;
  std::vector<std::size_t> test;
  if (const auto *cv = std::get_if<CrossValidation>(&policy)) {
    if (cv->folds < 2 || cv->fold_index >= cv->folds)
      throw ConfigError("cross-validation needs folds >= 2 and fold_index < folds");
    auto folds = detail::stratified_folds(pool, classes, cv->folds, rng);
    test = std::move(folds[cv->fold_index]);
    for (std::size_t f = 0; f < cv->folds; ++f)
      if (f != cv->fold_index)
        original_train.insert(original_train.end(), folds[f].begin(), folds[f].end());
    std::sort(original_train.begin(), original_train.end());
  } else if (const auto *ho = std::get_if<Holdout>(&policy)) {
    if (!(ho->test_fraction >= 0.0 && ho->test_fraction < 1.0))
      throw ConfigError("holdout test fraction must lie in [0,1)");
    auto [t, rest] = detail::stratified_split(all, pool, classes,
                                              detail::round_count(ho->test_fraction, all.size()), rng);
    test = std::move(t);
    original_train = std::move(rest);
  } else {
    original_train = all;
    for (const auto &s : data.fixed_test) {
      if (s.label >= classes)
        throw DataError("test sentence with invalid label");
      test.push_back(pool.size());
      pool.push_back(s);
    }
  }

  auto [train, validation] = detail::stratified_split(
      original_train, pool, classes, detail::round_count(ratio_init, original_train.size()), rng);

  std::vector<bool> present(classes, false);
  for (auto i : train)
    present[pool[i].label] = true;
  for (std::size_t c = 0; c < classes; ++c)
    if (!present[c])
      throw DataError("class '" + data.class_names[c] + "' is absent from the train split");

  PreparedCorpus out;
  out.class_names = data.class_names;

  std::set<std::string> train_tokens;
  std::vector<std::size_t> train_lengths;
  for (auto i : train) {
    train_tokens.insert(pool[i].tokens.begin(), pool[i].tokens.end());
    train_lengths.push_back(pool[i].tokens.size());
  }
  out.vocabulary = {"<pad>", "<unk>"};
  out.vocabulary.insert(out.vocabulary.end(), train_tokens.begin(), train_tokens.end());
  std::map<std::string, std::int32_t> ids;
  for (std::size_t i = 2; i < out.vocabulary.size(); ++i)
    ids.emplace(out.vocabulary[i], static_cast<std::int32_t>(i));

  // Nearest-rank 95th percentile of train lengths.
  std::sort(train_lengths.begin(), train_lengths.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(train_lengths.size())));
  out.sentence_length = std::max(kMinSentenceLength, train_lengths[std::max<std::size_t>(rank, 1) - 1]);

  auto encode = [&](std::size_t i) {
    Example e;
    e.label = pool[i].label;
    e.ids.assign(out.sentence_length, kPadId);
    for (std::size_t t = 0; t < pool[i].tokens.size() && t < out.sentence_length; ++t) {
      auto it = ids.find(pool[i].tokens[t]);
      e.ids[t] = it == ids.end() ? kUnknownId : it->second;
    }
    return e;
  };
  for (auto i : train)
    out.train.push_back(encode(i));
  for (auto i : validation)
    out.validation.push_back(encode(i));
  for (auto i : test)
    out.test.push_back(encode(i));

  std::set<std::string> every_token;
  std::size_t total_tokens = 0;
  for (const auto &s : pool) {
    every_token.insert(s.tokens.begin(), s.tokens.end());
    total_tokens += s.tokens.size();
  }
  out.stats.class_count = classes;
  out.stats.dataset_size = pool.size();
  out.stats.average_length = static_cast<double>(total_tokens) / static_cast<double>(pool.size());
  out.stats.vocab_size = out.vocabulary.size();
  out.stats.full_vocab_size = every_token.size();
  return out;
}

// ---------------------------------------------------------------------------
// Binary cache

namespace detail {

inline constexpr std::array<char, 8> kCorpusMagic{'S', 'A', 'C', 'N', 'C', 'O', 'R', '1'};

class BinaryWriter {
public:
  explicit BinaryWriter(std::ostream &out) : out_(out) {}
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
      b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char *>(b), 8);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(const std::string &s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

private:
  std::ostream &out_;
};

class BinaryReader {
public:
  explicit BinaryReader(std::istream &in) : in_(in) {}
  std::uint64_t u64() {
    unsigned char b[8];
    if (!in_.read(reinterpret_cast<char *>(b), 8))
      throw DataError("truncated binary file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    const auto n = u64();
    if (n > (1ull << 32))
      throw DataError("corrupt string length");
    std::string s(n, '\0');
    if (n && !in_.read(s.data(), static_cast<std::streamsize>(n)))
      throw DataError("truncated binary file");
    return s;
  }

private:
  std::istream &in_;
};

} // namespace detail

inline std::uint64_t file_digest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

/// Key of a prepared corpus: inputs, tokenizer version, split policy, seed.
inline std::string corpus_cache_key(const std::vector<std::filesystem::path> &inputs,
                                    const SplitPolicy &policy, double ratio_init,
                                    std::uint64_t seed) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "tok" << kTokenizerVersion << '|' << describe(policy) << "|ratio" << ratio_init
     << "|seed" << seed;
  for (const auto &p : inputs)
    os << '|' << std::hex << file_digest(p) << std::dec;
  return os.str();
}

inline void save_corpus(std::ostream &out, const PreparedCorpus &c, const std::string &key) {
  out.write(detail::kCorpusMagic.data(), detail::kCorpusMagic.size());
  detail::BinaryWriter w(out);
  w.str(key);
  w.u64(c.vocabulary.size());
  for (const auto &t : c.vocabulary)
    w.str(t);
  w.u64(c.class_names.size());
  for (const auto &t : c.class_names)
    w.str(t);
  w.u64(c.sentence_length);
  for (const auto *split : {&c.train, &c.validation, &c.test}) {
    w.u64(split->size());
    for (const auto &e : *split) {
      w.u64(e.label);
      w.u64(e.ids.size());
      for (auto id : e.ids)
        w.u64(static_cast<std::uint64_t>(id));
    }
  }
  w.u64(c.stats.class_count);
  w.f64(c.stats.average_length);
  w.u64(c.stats.dataset_size);
  w.u64(c.stats.vocab_size);
  w.u64(c.stats.full_vocab_size);
}

/// Returns nullopt when the stored key differs from `expected_key`.
inline std::optional<PreparedCorpus> load_corpus(std::istream &in,
                                                 const std::string &expected_key) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != detail::kCorpusMagic)
    throw DataError("not a prepared-corpus file");
  detail::BinaryReader r(in);
  if (r.str() != expected_key)
    return std::nullopt;
  PreparedCorpus c;
  c.vocabulary.resize(r.u64());
  for (auto &t : c.vocabulary)
    t = r.str();
  c.class_names.resize(r.u64());
  for (auto &t : c.class_names)
    t = r.str();
  c.sentence_length = r.u64();
  for (auto *split : {&c.train, &c.validation, &c.test}) {
    split->resize(r.u64());
    for (auto &e : *split) {
      e.label = r.u64();
      e.ids.resize(r.u64());
      for (auto &id : e.ids) {
        id = static_cast<std::int32_t>(r.u64());
        if (id < 0 || static_cast<std::size_t>(id) >= c.vocabulary.size())
          throw DataError("token id out of range in prepared corpus");
      }
    }
  }
  c.stats.class_count = r.u64();
  c.stats.average_length = r.f64();
  c.stats.dataset_size = r.u64();
  c.stats.vocab_size = r.u64();
  c.stats.full_vocab_size = r.u64();
  return c;
}

} // namespace sacnn
