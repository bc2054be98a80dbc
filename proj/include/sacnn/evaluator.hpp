#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sacnn/annealer.hpp"
#include "sacnn/corpus.hpp"
#include "sacnn/flops.hpp"
#include "sacnn/pareto.hpp"
#include "sacnn/search_space.hpp"
#include "sacnn/synthetic.hpp"
#include "sacnn/textcnn.hpp"

namespace sacnn {

struct EvaluationRequest {
  Configuration config;
  std::string data_split = "validation";
  std::uint64_t seed = 40;
};

// ---------------------------------------------------------------------------
// Early termination of poor trainings

enum class TrainingDecision { Continue, Stop };

struct EarlyStopRule {
  double chance_margin = 0.02; // epoch 1 must beat 1/C by this much
  std::size_t patience = 3;    // epochs without a new best accuracy
};

/// Stop when (a) the first epoch is no better than chance + margin, or
/// (b) the best accuracy has not improved for `patience` epochs.
inline TrainingDecision early_termination_check(const std::vector<double> &validation_history,
                                                std::size_t class_count,
                                                const EarlyStopRule &rule = {}) {
  if (validation_history.empty())
    throw ConfigError("early termination needs at least one epoch");
  if (validation_history.size() == 1 &&
      validation_history.front() < 1.0 / static_cast<double>(class_count) + rule.chance_margin)
    return TrainingDecision::Stop;
  std::size_t best_at = 0;
  for (std::size_t i = 1; i < validation_history.size(); ++i)
    if (validation_history[i] > validation_history[best_at])
      best_at = i;
  if (rule.patience > 0 && validation_history.size() - 1 - best_at >= rule.patience)
    return TrainingDecision::Stop;
  return TrainingDecision::Continue;
}

// ---------------------------------------------------------------------------
// Text-CNN objective

struct TextCnnEvaluatorOptions {
  std::size_t embedding_dim = 50;
  std::size_t max_epochs = 20;
  EarlyStopRule early_stop;
  std::uint64_t seed = 40;
};

struct TextCnnEvaluation {
  ObjectiveVector objectives;
  FlopsBreakdown flops;
  TrainingResult training;
};

inline InputShape input_shape_of(const PreparedCorpus &corpus, std::size_t embedding_dim) {
  return {corpus.sentence_length, embedding_dim, corpus.class_count()};
}

/// Train on the train split, score on the validation split:
/// error_rate = 1 - best validation accuracy.
inline TextCnnEvaluation evaluate_textcnn_detailed(const SearchSpace &space,
                                                   const EvaluationRequest &request,
                                                   const PreparedCorpus &corpus,
                                                   const TextCnnEvaluatorOptions &options) {
  const ConfiguredHyperparameters h = hyperparameters_of(space, request.config);
  const TextCnnSpec spec =
      make_spec(h, corpus.vocab_size(), options.embedding_dim, corpus.class_count());
  Rng init_rng(request.seed);
  TextCnnModel model = init_model(spec, init_rng);

  TrainingSettings settings;
  settings.learning_rate = h.learning_rate;
  settings.batch_size = h.batch_size;
  settings.max_epochs = options.max_epochs;
  settings.seed = request.seed;
  const std::size_t classes = corpus.class_count();
  const EarlyStopRule rule = options.early_stop;
  StopRule stop = [classes, rule](const std::vector<double> &history) {
    return early_termination_check(history, classes, rule) == TrainingDecision::Stop;
  };

  const std::vector<Example> &scored =
      request.data_split == "test" ? corpus.test : corpus.validation;
  TextCnnEvaluation out;
  out.training = train(std::move(model), corpus.train, scored, settings, stop);
  out.flops = estimate_flops(space, request.config, input_shape_of(corpus, options.embedding_dim));
  out.objectives.error_rate = std::clamp(1.0 - out.training.best_validation_accuracy, 0.0, 1.0);
  out.objectives.flops = out.flops.total;
  return out;
}

inline ObjectiveVector evaluate_textcnn(const SearchSpace &space, const EvaluationRequest &request,
                                        const PreparedCorpus &corpus,
                                        const TextCnnEvaluatorOptions &options) {
  return evaluate_textcnn_detailed(space, request, corpus, options).objectives;
}

class TextCnnEvaluator {
public:
  TextCnnEvaluator(SearchSpace space, std::shared_ptr<const PreparedCorpus> corpus,
                   TextCnnEvaluatorOptions options = {})
      : space_(std::move(space)), corpus_(std::move(corpus)), options_(options) {
    if (!corpus_)
      throw ConfigError("Text-CNN evaluator needs a corpus");
  }

  ObjectiveVector evaluate(const Configuration &config) {
    ++trainings_;
    return evaluate_textcnn(space_, {config, "validation", options_.seed}, *corpus_, options_);
  }

  std::uint64_t max_flops() const {
    return sacnn::max_flops(space_, input_shape_of(*corpus_, options_.embedding_dim));
  }

  std::uint64_t seed() const noexcept { return options_.seed; }
  std::size_t trainings() const noexcept { return trainings_; }
  const SearchSpace &space() const noexcept { return space_; }

private:
  SearchSpace space_;
  std::shared_ptr<const PreparedCorpus> corpus_;
  TextCnnEvaluatorOptions options_;
  std::size_t trainings_ = 0;
};

// ---------------------------------------------------------------------------
// Caching

/// Stable 64-bit key of (configuration, seed).
inline std::uint64_t evaluation_key(const SearchSpace &space, const Configuration &config,
                                    std::uint64_t seed) {
  return fnv1a(to_string(space, config) + "|seed=" + std::to_string(seed));
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4)
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

/// Memoizes an evaluator by (config, seed). With a path, results are also
/// appended to a line-per-entry file and reloaded on construction, so an
/// interrupted run resumes without re-training.
template <ObjectiveEvaluator E> class CachingEvaluator {
public:
  CachingEvaluator(E inner, SearchSpace space, std::uint64_t seed,
                   std::optional<std::filesystem::path> path = std::nullopt)
      : inner_(std::move(inner)), space_(std::move(space)), seed_(seed), path_(std::move(path)) {
    if (path_)
      load();
  }

  ObjectiveVector evaluate(const Configuration &config) {
    const std::string canonical = to_string(space_, config);
    const std::uint64_t key = evaluation_key(space_, config, seed_);
    if (auto it = cache_.find(key); it != cache_.end() && it->second.first == canonical) {
      ++hits_;
      return it->second.second;
    }
    const ObjectiveVector v = inner_.evaluate(config);
    validate(v);
    ++misses_;
    cache_[key] = {canonical, v};
    if (path_)
      append(key, canonical, v);
    return v;
  }

  ObjectiveVector evaluate(const EvaluationRequest &request) {
    if (request.seed != seed_)
      throw ConfigError("request seed differs from the evaluator seed");
    return evaluate(request.config);
  }

  std::uint64_t max_flops() const { return inner_.max_flops(); }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t size() const noexcept { return cache_.size(); }
  E &inner() noexcept { return inner_; }

private:
  void load() {
    std::ifstream in(*path_);
    if (!in)
      return;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty())
        continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded())
        throw DataError("corrupt evaluation cache '" + path_->string() + "'");
      if (header) {
        if (j.value("format", "") != "sacnn-eval-cache" || j.value("version", 0) != 1)
          throw DataError("'" + path_->string() + "' is not an evaluation cache");
        header = false;
        continue;
      }
      if (j.at("seed").get<std::uint64_t>() != seed_)
        continue;
      const auto key = std::stoull(j.at("key").get<std::string>(), nullptr, 16);
      cache_[key] = {j.at("config").get<std::string>(),
                     ObjectiveVector{j.at("error_rate").get<double>(),
                                     j.at("flops").get<std::uint64_t>()}};
    }
    header_written_ = !header;
  }

  void append(std::uint64_t key, const std::string &canonical, const ObjectiveVector &v) {
    std::ofstream out(*path_, std::ios::app);
    if (!out)
      throw DataError("cannot write evaluation cache '" + path_->string() + "'");
    if (!header_written_) {
      out << nlohmann::json{{"format", "sacnn-eval-cache"}, {"version", 1}}.dump() << '\n';
      header_written_ = true;
    }
    nlohmann::ordered_json j;
    j["key"] = hex64(key);
    j["config"] = canonical;
    j["seed"] = seed_;
    j["error_rate"] = v.error_rate;
    j["flops"] = v.flops;
    out << j.dump() << '\n';
  }

  E inner_;
  SearchSpace space_;
  std::uint64_t seed_;
  std::optional<std::filesystem::path> path_;
  std::map<std::uint64_t, std::pair<std::string, ObjectiveVector>> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
  bool header_written_ = false;
};

} // namespace sacnn
