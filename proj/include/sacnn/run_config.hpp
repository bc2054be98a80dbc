#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sacnn/annealer.hpp"
#include "sacnn/error.hpp"
#include "sacnn/evaluator.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

/// Everything a tuning run needs. Serialized as a JSON object whose keys are
/// exactly the member names; unknown keys are rejected on load.
struct RunConfig {
  SearchSpace space = default_search_space();
  std::uint64_t seed_number = 40;
  double ratio_init = 0.9;
  std::size_t iteration_budget = 250;
  double initial_acceptance_probability = 0.5;
  double final_acceptance_probability = 0.0357;
  double cooling_rate = 0.95;
  std::size_t probe_count = 10;
  double return_to_base_probability = 0.5;
  std::size_t no_improvement_patience = 0;
  // "textcnn" or "synthetic:<name>"
  std::string objective_kind = "textcnn";
  // "synthetic" (bundled corpus), "mr", "cr" or "trec"
  std::string dataset_format = "synthetic";
  std::optional<std::string> dataset_path;
  // MR: the negative file; TREC: the test file.
  std::optional<std::string> dataset_aux_path;
  std::size_t cv_fold = 0;
  std::size_t max_epochs = 20;
  std::size_t embedding_dim = 50;
  double early_stop_margin = 0.02;
  std::size_t early_stop_patience = 3;

  bool synthetic_objective() const { return objective_kind.rfind("synthetic:", 0) == 0; }
  std::string synthetic_name() const { return objective_kind.substr(10); }

  void validate() const {
    space.require_searchable();
    if (iteration_budget < 1)
      throw ConfigError("iteration_budget must be >= 1");
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0))
      throw ConfigError("cooling_rate must lie in (0,1)");
    if (!(initial_acceptance_probability > 0.0 && initial_acceptance_probability < 1.0))
      throw ConfigError("initial_acceptance_probability must lie in (0,1)");
    if (!(final_acceptance_probability > 0.0 &&
          final_acceptance_probability < initial_acceptance_probability))
      throw ConfigError("final_acceptance_probability must lie in (0, initial)");
    if (!(ratio_init > 0.0 && ratio_init < 1.0))
      throw ConfigError("ratio_init must lie in (0,1)");
    if (probe_count < 2)
      throw ConfigError("probe_count must be >= 2");
    if (!(return_to_base_probability >= 0.0 && return_to_base_probability <= 1.0))
      throw ConfigError("return_to_base_probability must lie in [0,1]");
    if (synthetic_objective())
      parse_synthetic_objective(synthetic_name());
    else if (objective_kind != "textcnn")
      throw ConfigError("objective_kind must be 'textcnn' or 'synthetic:<name>'");
    static const std::set<std::string> formats{"synthetic", "mr", "cr", "trec"};
    if (!formats.contains(dataset_format))
      throw ConfigError("dataset_format must be one of synthetic, mr, cr, trec");
    if (dataset_format != "synthetic" && !dataset_path)
      throw ConfigError("dataset_path is required for dataset_format '" + dataset_format + "'");
    if (dataset_format == "mr" && !dataset_aux_path)
      throw ConfigError("MR needs dataset_path (positive) and dataset_aux_path (negative)");
    if (max_epochs < 1 || embedding_dim < 1)
      throw ConfigError("max_epochs and embedding_dim must be >= 1");
  }

  AnnealerSettings annealer_settings() const {
    AnnealerSettings s;
    s.seed = seed_number;
    s.iteration_budget = iteration_budget;
    s.initial_acceptance_probability = initial_acceptance_probability;
    s.final_acceptance_probability = final_acceptance_probability;
    s.cooling_rate = cooling_rate;
    s.probe_count = probe_count;
    s.return_to_base_probability = return_to_base_probability;
    s.no_improvement_patience = no_improvement_patience;
    return s;
  }

  TextCnnEvaluatorOptions evaluator_options() const {
    TextCnnEvaluatorOptions o;
    o.embedding_dim = embedding_dim;
    o.max_epochs = max_epochs;
    o.early_stop = {early_stop_margin, early_stop_patience};
    o.seed = seed_number;
    return o;
  }
};

inline nlohmann::ordered_json space_to_json(const SearchSpace &space) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto &d : space.domains()) {
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto &v : d.values())
      values.push_back(v.text());
    out.push_back({{"name", d.name()}, {"values", values}});
  }
  return out;
}

inline SearchSpace space_from_json(const nlohmann::json &j) {
  if (!j.is_array())
    throw ConfigError("'space' must be an array of {name, values}");
  std::vector<ParamDomain> domains;
  for (const auto &d : j) {
    if (!d.is_object() || !d.contains("name") || !d.contains("values") || d.size() != 2)
      throw ConfigError("each domain needs exactly 'name' and 'values'");
    std::vector<Value> values;
    for (const auto &v : d.at("values")) {
      if (v.is_string())
        values.push_back(Value::parse(v.get<std::string>()));
      else if (v.is_number())
        values.push_back(Value::parse(v.dump()));
      else
        throw ConfigError("domain values must be strings or numbers");
    }
    domains.emplace_back(d.at("name").get<std::string>(), std::move(values));
  }
  return SearchSpace(std::move(domains));
}

inline nlohmann::ordered_json to_json(const RunConfig &c) {
  nlohmann::ordered_json j;
  j["space"] = space_to_json(c.space);
  j["seed_number"] = c.seed_number;
  j["ratio_init"] = c.ratio_init;
  j["iteration_budget"] = c.iteration_budget;
  j["initial_acceptance_probability"] = c.initial_acceptance_probability;
  j["final_acceptance_probability"] = c.final_acceptance_probability;
  j["cooling_rate"] = c.cooling_rate;
  j["probe_count"] = c.probe_count;
  j["return_to_base_probability"] = c.return_to_base_probability;
  j["no_improvement_patience"] = c.no_improvement_patience;
  j["objective_kind"] = c.objective_kind;
  j["dataset_format"] = c.dataset_format;
  j["dataset_path"] = c.dataset_path ? nlohmann::ordered_json(*c.dataset_path) : nlohmann::ordered_json(nullptr);
  j["dataset_aux_path"] =
      c.dataset_aux_path ? nlohmann::ordered_json(*c.dataset_aux_path) : nlohmann::ordered_json(nullptr);
  j["cv_fold"] = c.cv_fold;
  j["max_epochs"] = c.max_epochs;
  j["embedding_dim"] = c.embedding_dim;
  j["early_stop_margin"] = c.early_stop_margin;
  j["early_stop_patience"] = c.early_stop_patience;
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("run config must be a JSON object");
  static const std::set<std::string> known{
      "space", "seed_number", "ratio_init", "iteration_budget",
      "initial_acceptance_probability", "final_acceptance_probability", "cooling_rate",
      "probe_count", "return_to_base_probability", "no_improvement_patience",
      "objective_kind", "dataset_format", "dataset_path", "dataset_aux_path", "cv_fold",
      "max_epochs", "embedding_dim", "early_stop_margin", "early_stop_patience"};
  for (const auto &[key, _] : j.items())
    if (!known.contains(key))
      throw ConfigError("unknown run config key '" + key + "'");

  RunConfig c;
  try {
    if (j.contains("space"))
      c.space = space_from_json(j.at("space"));
    auto get = [&](const char *key, auto &field) {
      if (j.contains(key))
        field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    auto get_optional = [&](const char *key, std::optional<std::string> &field) {
      if (j.contains(key) && !j.at(key).is_null())
        field = j.at(key).get<std::string>();
    };
    get("seed_number", c.seed_number);
    get("ratio_init", c.ratio_init);
    get("iteration_budget", c.iteration_budget);
    get("initial_acceptance_probability", c.initial_acceptance_probability);
    get("final_acceptance_probability", c.final_acceptance_probability);
    get("cooling_rate", c.cooling_rate);
    get("probe_count", c.probe_count);
    get("return_to_base_probability", c.return_to_base_probability);
    get("no_improvement_patience", c.no_improvement_patience);
    get("objective_kind", c.objective_kind);
    get("dataset_format", c.dataset_format);
    get_optional("dataset_path", c.dataset_path);
    get_optional("dataset_aux_path", c.dataset_aux_path);
    get("cv_fold", c.cv_fold);
    get("max_epochs", c.max_epochs);
    get("embedding_dim", c.embedding_dim);
    get("early_stop_margin", c.early_stop_margin);
    get("early_stop_patience", c.early_stop_patience);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open run config '" + path.string() + "'");
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw ConfigError("run config '" + path.string() + "' is not valid JSON");
  return run_config_from_json(j);
}

} // namespace sacnn
