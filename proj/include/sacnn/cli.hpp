#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sacnn/annealer.hpp"
#include "sacnn/corpus.hpp"
#include "sacnn/error.hpp"
#include "sacnn/evaluator.hpp"
#include "sacnn/report.hpp"
#include "sacnn/run_config.hpp"
#include "sacnn/synthetic.hpp"

namespace sacnn::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kRuntime = 3 };

/// Maps library exceptions onto the exit-code contract.
inline int guarded(std::ostream &err, const std::function<int()> &body) {
  try {
    return body();
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError &e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception &e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}

// ---------------------------------------------------------------------------
// plan

struct PlanOptions {
  double t_init = 0.577;
  double t_final = 0.12;
  std::size_t budget = 250;
  std::vector<double> cooling_rates{0.99, 0.95, 0.9, 0.85, 0.8};
};

inline std::string plan_table(const PlanOptions &o) {
  std::vector<std::vector<std::string>> rows{{"Iteration budget", "T_init", "T_final",
                                              "Cooling rate", "#Outer iterations",
                                              "#Inner iterations"}};
  auto general = [](double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << v;
    return os.str();
  };
  for (double rate : o.cooling_rates) {
    const auto s = plan_schedule(o.t_init, o.t_final, rate, o.budget);
    rows.push_back({std::to_string(o.budget), general(o.t_init), general(o.t_final),
                    general(rate), detail::fixed(report_one_decimal(s.outer_iterations), 1),
                    detail::fixed(report_one_decimal(s.inner_iterations), 1)});
  }
  return detail::table(rows);
}

inline int cmd_plan(const PlanOptions &o, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    if (o.cooling_rates.empty())
      throw ConfigError("at least one cooling rate is required");
    out << plan_table(o);
    return kSuccess;
  });
}

// ---------------------------------------------------------------------------
// shared corpus preparation

inline std::shared_ptr<const PreparedCorpus>
prepare_corpus(const std::string &format, const std::optional<std::string> &path,
               const std::optional<std::string> &aux, std::size_t cv_fold, double ratio_init,
               std::uint64_t seed, const std::optional<std::filesystem::path> &cache_dir) {
  const Dataset data = load_dataset(format, path, aux, seed);
  const SplitPolicy policy = default_policy(data, cv_fold);
  if (!cache_dir || format == "synthetic")
    return std::make_shared<const PreparedCorpus>(make_splits(data, policy, ratio_init, seed));

  std::vector<std::filesystem::path> inputs{*path};
  if (aux)
    inputs.emplace_back(*aux);
  const std::string key = corpus_cache_key(inputs, policy, ratio_init, seed);
  std::filesystem::create_directories(*cache_dir);
  const auto file = *cache_dir / ("corpus-" + hex64(fnv1a(key)) + ".bin");
  if (std::ifstream in(file, std::ios::binary); in)
    if (auto cached = load_corpus(in, key))
      return std::make_shared<const PreparedCorpus>(std::move(*cached));
  auto prepared = make_splits(data, policy, ratio_init, seed);
  std::ostringstream bytes;
  save_corpus(bytes, prepared, key);
  atomic_write(file, bytes.str());
  return std::make_shared<const PreparedCorpus>(std::move(prepared));
}

// ---------------------------------------------------------------------------
// tune

struct TuneOptions {
  std::filesystem::path config;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> eval_cache;
  std::optional<std::filesystem::path> corpus_cache;
  std::size_t top_k = 3;
};

struct TuneOutcome {
  RunResult result;
  std::vector<std::filesystem::path> artifacts;
};

inline TuneOutcome tune(const RunConfig &config, const TuneOptions &o) {
  auto finish = [&](RunResult result) {
    const auto sorted = front(result.archive);
    // Render everything before touching the output directory.
    const std::string txt = archive_text(config.space, sorted, o.top_k);
    const std::string json = archive_json(config.space, sorted, o.top_k);
    const std::string trace = trace_jsonl(config.space, result);
    const std::string calib = calibration_json(result);
    std::filesystem::create_directories(o.output_dir);
    TuneOutcome out;
    for (const auto &[name, body] : {std::pair{"archive.txt", &txt}, std::pair{"archive.json", &json},
                                     std::pair{"trace.jsonl", &trace},
                                     std::pair{"calibration.json", &calib}}) {
      atomic_write(o.output_dir / name, *body);
      out.artifacts.push_back(o.output_dir / name);
    }
    out.result = std::move(result);
    return out;
  };

  if (config.synthetic_objective()) {
    const InputShape shape{20, config.embedding_dim, 2};
    CachingEvaluator evaluator(
        SyntheticEvaluator(config.space, parse_synthetic_objective(config.synthetic_name()), shape),
        config.space, config.seed_number, o.eval_cache);
    return finish(run(config.space, config.annealer_settings(), evaluator));
  }
  auto corpus = prepare_corpus(config.dataset_format, config.dataset_path,
                               config.dataset_aux_path, config.cv_fold, config.ratio_init,
                               config.seed_number, o.corpus_cache);
  CachingEvaluator evaluator(TextCnnEvaluator(config.space, corpus, config.evaluator_options()),
                             config.space, config.seed_number, o.eval_cache);
  return finish(run(config.space, config.annealer_settings(), evaluator));
}

inline int cmd_tune(const TuneOptions &o, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    RunConfig config = load_run_config(o.config);
    if (o.seed)
      config.seed_number = *o.seed;
    const TuneOutcome outcome = tune(config, o);
    const auto sorted = front(outcome.result.archive);
    out << "stop: " << to_string(outcome.result.stop_reason)
        << ", evaluations: " << outcome.result.evaluations
        << ", archive: " << sorted.size() << " entries\n";
    if (!sorted.empty()) {
      const auto &best = sorted.front();
      out << "best: " << to_string(config.space, best.config)
          << " error_rate=" << detail::fixed(best.objectives.error_rate, 6)
          << " flops=" << best.objectives.flops << '\n';
    }
    for (const auto &p : outcome.artifacts)
      out << "wrote " << p.string() << '\n';
    return kSuccess;
  });
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::map<std::string, std::string> values;
  std::string corpus_format = "synthetic";
  std::optional<std::string> corpus;
  std::optional<std::string> corpus_aux;
  std::uint64_t seed = 40;
  double ratio_init = 0.9;
  std::size_t epochs = 20;
  std::size_t embedding_dim = 50;
  bool flops_only = false;
  std::optional<std::filesystem::path> output_dir;
};

inline int cmd_eval(const EvalOptions &o, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const SearchSpace space = default_search_space();
    const Configuration config = configuration_from_assignments(space, o.values);
    const auto corpus =
        prepare_corpus(o.corpus_format, o.corpus, o.corpus_aux, 0, o.ratio_init, o.seed, std::nullopt);
    const InputShape shape = input_shape_of(*corpus, o.embedding_dim);
    const FlopsBreakdown flops = estimate_flops(space, config, shape);

    out << "config: " << to_string(space, config) << '\n';
    out << "input: n=" << shape.sentence_length << " k=" << shape.embedding_dim
        << " classes=" << shape.class_count << '\n';
    for (std::size_t i = 0; i < kWindowSizes.size(); ++i)
      out << "conv_flops[win " << kWindowSizes[i] << "]: " << flops.conv_flops[i] << '\n';
    out << "fc_flops: " << flops.fc_flops << '\n';
    out << "flops: " << flops.total << '\n';
    if (o.flops_only)
      return kSuccess;

    TextCnnEvaluatorOptions options;
    options.embedding_dim = o.embedding_dim;
    options.max_epochs = o.epochs;
    options.seed = o.seed;
    const auto evaluation = evaluate_textcnn_detailed(space, {config, "validation", o.seed}, *corpus, options);
    out << "epochs: " << evaluation.training.history.size()
        << (evaluation.training.stopped_early ? " (stopped early)" : "") << '\n';
    out << "error_rate: " << detail::fixed(evaluation.objectives.error_rate, 6) << '\n';
    if (o.output_dir) {
      std::ostringstream model_bytes, history;
      save_model(model_bytes, evaluation.training.model);
      write_history(history, evaluation.training.history);
      std::filesystem::create_directories(*o.output_dir);
      atomic_write(*o.output_dir / "model.ckpt", model_bytes.str());
      atomic_write(*o.output_dir / "history.tsv", history.str());
      out << "wrote " << (*o.output_dir / "model.ckpt").string() << '\n';
      out << "wrote " << (*o.output_dir / "history.tsv").string() << '\n';
    }
    return kSuccess;
  });
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOptions {
  std::map<std::string, std::vector<std::string>> domains;
  std::string objective = "sphere_proxy";
  std::uint64_t cap = 100000;
  std::size_t embedding_dim = 50;
  std::filesystem::path output_dir = ".";
  std::size_t top_k = 3;
};

/// Evaluates every configuration of the restricted space and keeps the
/// exact Pareto front. iteration_found holds the enumeration ordinal.
inline std::vector<ArchiveEntry> oracle_front(const SearchSpace &space, SyntheticObjective objective,
                                              std::uint64_t cap, const InputShape &shape) {
  std::vector<ArchiveEntry> all;
  std::size_t ordinal = 0;
  for_each_configuration(space, cap, [&](const Configuration &c) {
    all.push_back({c, evaluate_synthetic(objective, space, c, shape), ordinal++});
  });
  return exhaustive_front(all);
}

inline int cmd_oracle(const OracleOptions &o, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const SearchSpace space = restrict_space(default_search_space(), o.domains);
    const auto objective = parse_synthetic_objective(o.objective);
    const auto entries = oracle_front(space, objective, o.cap, {20, o.embedding_dim, 2});
    const std::string txt = archive_text(space, entries, o.top_k, "front");
    const std::string json = archive_json(space, entries, o.top_k);
    std::filesystem::create_directories(o.output_dir);
    atomic_write(o.output_dir / "front.txt", txt);
    atomic_write(o.output_dir / "front.json", json);
    out << "enumerated " << space.cardinality() << " configurations, front has "
        << entries.size() << " entries\n";
    out << "wrote " << (o.output_dir / "front.txt").string() << '\n';
    out << "wrote " << (o.output_dir / "front.json").string() << '\n';
    return kSuccess;
  });
}

} // namespace sacnn::cli
