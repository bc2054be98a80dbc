// Command-line front end: plan, tune, eval, oracle.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sacnn/cli.hpp"

namespace {

// Splits "name=v1,v2,..." into the name and its value list.
std::pair<std::string, std::vector<std::string>> parse_domain_flag(const std::string &text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw sacnn::ConfigError("--domain expects name=v1,v2,... but got '" + text + "'");
  std::vector<std::string> values;
  std::string rest = text.substr(eq + 1);
  std::size_t start = 0;
  while (true) {
    const auto comma = rest.find(',', start);
    values.push_back(rest.substr(start, comma - start));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return {text.substr(0, eq), values};
}

} // namespace

int main(int argc, char **argv) {
  using namespace sacnn;
  CLI::App app{"Multi-objective simulated annealing for Text-CNN hyperparameters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sacnn 1.0.0");

  // plan
  cli::PlanOptions plan;
  auto *plan_cmd = app.add_subcommand("plan", "Print outer/inner iteration counts per cooling rate");
  plan_cmd->add_option("--t-init", plan.t_init, "Initial temperature")->capture_default_str();
  plan_cmd->add_option("--t-final", plan.t_final, "Final temperature")->capture_default_str();
  plan_cmd->add_option("--budget", plan.budget, "Iteration budget")->capture_default_str();
  plan_cmd->add_option("--cooling-rates", plan.cooling_rates, "Cooling rates")
      ->delimiter(',')
      ->capture_default_str();

  // tune
  cli::TuneOptions tune;
  std::uint64_t tune_seed = 0;
  std::string tune_eval_cache, tune_corpus_cache;
  auto *tune_cmd = app.add_subcommand("tune", "Run the annealer and export the Pareto archive");
  tune_cmd->add_option("--config", tune.config, "Run config (JSON)")->required();
  tune_cmd->add_option("--output-dir", tune.output_dir, "Directory for artifacts")->required();
  auto *tune_seed_opt = tune_cmd->add_option("--seed", tune_seed, "Override seed_number");
  auto *eval_cache_opt =
      tune_cmd->add_option("--eval-cache", tune_eval_cache, "Evaluation cache file (resumable)");
  auto *corpus_cache_opt =
      tune_cmd->add_option("--corpus-cache", tune_corpus_cache, "Directory for prepared corpora");
  tune_cmd->add_option("--top-k", tune.top_k, "Entries in the top-k section")->capture_default_str();

  // eval
  cli::EvalOptions eval;
  std::string eval_output_dir, eval_corpus, eval_corpus_aux;
  std::map<std::string, std::string> eval_flag_values;
  std::vector<std::string> eval_names;
  const SearchSpace full_space = default_search_space();
  for (const auto &d : full_space.domains())
    eval_names.push_back(d.name());
  auto *eval_cmd = app.add_subcommand("eval", "Evaluate one configuration");
  for (const auto &name : eval_names)
    eval_cmd->add_option("--" + name, eval_flag_values[name], "Value of " + name);
  eval_cmd->add_option("--corpus-format", eval.corpus_format, "synthetic, mr, cr or trec")
      ->capture_default_str();
  auto *corpus_opt = eval_cmd->add_option("--corpus", eval_corpus, "Corpus file");
  auto *corpus_aux_opt =
      eval_cmd->add_option("--corpus-aux", eval_corpus_aux, "MR negative file or TREC test file");
  eval_cmd->add_option("--seed", eval.seed, "Seed")->capture_default_str();
  eval_cmd->add_option("--epochs", eval.epochs, "Maximum epochs")->capture_default_str();
  eval_cmd->add_option("--embedding-dim", eval.embedding_dim, "Embedding width")
      ->capture_default_str();
  eval_cmd->add_flag("--flops-only", eval.flops_only, "Skip training");
  auto *eval_out_opt =
      eval_cmd->add_option("--output-dir", eval_output_dir, "Write checkpoint and history here");

  // oracle
  cli::OracleOptions oracle;
  std::vector<std::string> oracle_domains;
  auto *oracle_cmd = app.add_subcommand("oracle", "Exhaustive Pareto front of a restricted space");
  oracle_cmd->add_option("--domain", oracle_domains,
                         "Restrict a domain: name=v1,v2 (unlisted domains keep their first value)");
  oracle_cmd->add_option("--objective", oracle.objective, "sphere_proxy or deceptive_trap")
      ->capture_default_str();
  oracle_cmd->add_option("--cap", oracle.cap, "Maximum configurations to enumerate")
      ->capture_default_str();
  oracle_cmd->add_option("--output-dir", oracle.output_dir, "Directory for front files")
      ->capture_default_str();
  oracle_cmd->add_option("--top-k", oracle.top_k, "Entries in the top-k section")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  if (*plan_cmd)
    return cli::cmd_plan(plan, std::cout, std::cerr);

  if (*tune_cmd) {
    if (*tune_seed_opt)
      tune.seed = tune_seed;
    if (*eval_cache_opt)
      tune.eval_cache = tune_eval_cache;
    if (*corpus_cache_opt)
      tune.corpus_cache = tune_corpus_cache;
    return cli::cmd_tune(tune, std::cout, std::cerr);
  }

  if (*eval_cmd) {
    for (const auto &name : eval_names) {
      if (eval_cmd->get_option("--" + name)->count() == 0) {
        std::cerr << "error: missing --" << name << '\n';
        return cli::kUsage;
      }
      eval.values[name] = eval_flag_values[name];
    }
    if (*corpus_opt)
      eval.corpus = eval_corpus;
    if (*corpus_aux_opt)
      eval.corpus_aux = eval_corpus_aux;
    if (*eval_out_opt)
      eval.output_dir = eval_output_dir;
    return cli::cmd_eval(eval, std::cout, std::cerr);
  }

  return cli::guarded(std::cerr, [&] {
    for (const auto &flag : oracle_domains) {
      auto [name, values] = parse_domain_flag(flag);
      oracle.domains[name] = values;
    }
    return cli::cmd_oracle(oracle, std::cout, std::cerr);
  });
}
