#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sacnn/error.hpp"
#include "sacnn/pareto.hpp"
#include "sacnn/random.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

/// Anything that maps a configuration to its two objectives and knows the
/// largest FLOPs value its space can produce.
template <class E>
concept ObjectiveEvaluator = requires(E &e, const Configuration &c) {
  { e.evaluate(c) } -> std::same_as<ObjectiveVector>;
  { e.max_flops() } -> std::convertible_to<std::uint64_t>;
};

// ---------------------------------------------------------------------------
// Schedule

/// Temperature range, cooling rate and budget, plus the real-valued numbers
/// of temperature steps (outer) and evaluations per step (inner) they imply.
struct AnnealingSchedule {
  double t_init = 0.0;
  double t_final = 0.0;
  double cooling_rate = 0.0;
  std::size_t iteration_budget = 0;
  double outer_iterations = 0.0;
  double inner_iterations = 0.0;

  /// Temperature steps the executor runs.
  std::size_t executed_outer() const {
    return static_cast<std::size_t>(std::ceil(outer_iterations - 1e-9));
  }

  /// Evaluations per temperature step the executor runs (at least one).
  std::size_t executed_inner() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(inner_iterations)));
  }
};

/// One-decimal report value, truncated toward zero: 30.615 -> 30.6,
/// 8.166 -> 8.1.
inline double report_one_decimal(double x) {
  return std::floor(x * 10.0 + 1e-9) / 10.0;
}

inline AnnealingSchedule plan_schedule(double t_init, double t_final, double cooling_rate,
                                       std::size_t iteration_budget) {
  if (!(t_final > 0.0) || !(t_final < t_init))
    throw ConfigError("schedule requires 0 < t_final < t_init");
  if (!(cooling_rate > 0.0 && cooling_rate < 1.0))
    throw ConfigError("cooling rate must lie in (0,1)");
  if (iteration_budget == 0)
    throw ConfigError("iteration budget must be positive");
  AnnealingSchedule s;
  s.t_init = t_init;
  s.t_final = t_final;
  s.cooling_rate = cooling_rate;
  s.iteration_budget = iteration_budget;
  s.outer_iterations = std::log(t_final / t_init) / std::log(cooling_rate);
  s.inner_iterations = static_cast<double>(iteration_budget) / s.outer_iterations;
  return s;
}

/// Geometric decay.
constexpr double cool(double temperature, double cooling_rate) noexcept {
  return temperature * cooling_rate;
}

/// min{1, exp(-dF / T)}.
inline double acceptance_probability(double delta_f, double temperature) {
  if (!(temperature > 0.0))
    throw ConfigError("temperature must be positive");
  return std::min(1.0, std::exp(-delta_f / temperature));
}

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationReport {
  double delta_f_ave = 0.0;
  std::size_t probe_count = 0;
  std::size_t deteriorations = 0;
  double p_init = 0.0;
  double p_final = 0.0;
  double t_init = 0.0;
  double t_final = 0.0;
  // Start of the probe walk; the search begins here.
  Configuration start;
  ObjectiveVector start_objectives;
};

/// T = -dF_ave / ln(p): the temperature at which an average deterioration is
/// accepted with probability p.
inline double temperature_for(double delta_f_ave, double probability) {
  if (!(probability > 0.0 && probability < 1.0))
    throw ConfigError("acceptance probability must lie in (0,1)");
  return -delta_f_ave / std::log(probability);
}

inline CalibrationReport calibration_from_average(double delta_f_ave, double p_init,
                                                  double p_final) {
  if (!(delta_f_ave > 0.0))
    throw CalibrationError("average deterioration must be positive");
  if (!(p_final < p_init))
    throw ConfigError("final acceptance probability must be below the initial one");
  CalibrationReport r;
  r.delta_f_ave = delta_f_ave;
  r.p_init = p_init;
  r.p_final = p_final;
  r.t_init = temperature_for(delta_f_ave, p_init);
  r.t_final = temperature_for(delta_f_ave, p_final);
  return r;
}

/// Short random walk: a random start plus probe_count - 1 neighbor moves,
/// probe_count evaluations in total. Only deteriorating moves (dF > 0)
/// enter the average.
template <ObjectiveEvaluator E>
CalibrationReport calibrate_initial_temperature(const SearchSpace &space, E &evaluator,
                                                double p_init, double p_final,
                                                std::size_t probe_count,
                                                std::uint64_t flops_max, Rng &rng) {
  if (probe_count < 2)
    throw ConfigError("calibration needs at least 2 probes");
  Configuration x = random_configuration(space, rng);
  ObjectiveVector fx = evaluator.evaluate(x);
  const Configuration start = x;
  const ObjectiveVector start_objectives = fx;
  double sum = 0.0;
  std::size_t positive = 0;
  for (std::size_t i = 1; i < probe_count; ++i) {
    Configuration y = neighbor(x, space, rng);
    ObjectiveVector fy = evaluator.evaluate(y);
    const double df = scalar_deterioration(fx, fy, flops_max);
    if (df > 0.0) {
      sum += df;
      ++positive;
    }
    x = std::move(y);
    fx = fy;
  }
  if (positive == 0)
    throw CalibrationError("no deteriorating move observed in " +
                           std::to_string(probe_count) +
                           " probes; retry with a larger probe count");
  CalibrationReport r =
      calibration_from_average(sum / static_cast<double>(positive), p_init, p_final);
  r.probe_count = probe_count;
  r.deteriorations = positive;
  r.start = start;
  r.start_objectives = start_objectives;
  return r;
}

// ---------------------------------------------------------------------------
// Steps

struct AnnealerState {
  Configuration current;
  ObjectiveVector current_objectives;
  double temperature = 0.0;
  std::size_t iteration = 0;
  Rng rng;
  std::size_t rejected_streak = 0;
};

enum class StepKind { Init, Step, ReturnToBase, EvaluationFailed };

inline const char *to_string(StepKind k) {
  switch (k) {
  case StepKind::Init: return "init";
  case StepKind::Step: return "step";
  case StepKind::ReturnToBase: return "return_to_base";
  case StepKind::EvaluationFailed: return "evaluation_failed";
  }
  return "?";
}

struct StepRecord {
  StepKind kind = StepKind::Step;
  std::size_t iteration = 0;
  std::size_t outer_step = 0;
  double temperature = 0.0;
  Configuration current;
  ObjectiveVector current_objectives;
  Configuration candidate;
  ObjectiveVector candidate_objectives;
  double delta_f = 0.0;
  double probability = 1.0;
  std::optional<double> draw; // uniform(0,1) sample, when one was needed
  bool accepted = false;
  std::optional<InsertResult> archive_action;
  std::string error;

  bool operator==(const StepRecord &) const = default;
};

/// One "generate -> evaluate -> accept or reject" move at the current
/// temperature. On evaluator failure the exception propagates and `state`
/// and `archive` are untouched.
template <ObjectiveEvaluator E>
StepRecord step(AnnealerState &state, const AnnealingSchedule &schedule,
                ParetoArchive &archive, E &evaluator, const SearchSpace &space,
                std::uint64_t flops_max) {
  if (state.iteration >= schedule.iteration_budget)
    throw ConfigError("iteration budget exhausted");
  if (state.temperature < schedule.t_final)
    throw ConfigError("temperature below t_final");

  Rng rng = state.rng;
  Configuration candidate = neighbor(state.current, space, rng);
  const ObjectiveVector objectives = evaluator.evaluate(candidate);
  validate(objectives);

  StepRecord rec;
  rec.kind = StepKind::Step;
  rec.iteration = state.iteration + 1;
  rec.temperature = state.temperature;
  rec.current = state.current;
  rec.current_objectives = state.current_objectives;
  rec.candidate = candidate;
  rec.candidate_objectives = objectives;
  rec.archive_action = archive.insert({candidate, objectives, rec.iteration});
  rec.delta_f = scalar_deterioration(state.current_objectives, objectives, flops_max);
  rec.probability = acceptance_probability(rec.delta_f, state.temperature);
  if (rec.delta_f < 0.0) {
    rec.accepted = true;
  } else {
    rec.draw = rng.uniform01();
    rec.accepted = *rec.draw <= rec.probability;
  }

  state.rng = rng;
  state.iteration = rec.iteration;
  if (rec.accepted) {
    state.current = std::move(candidate);
    state.current_objectives = objectives;
    state.rejected_streak = 0;
  } else {
    ++state.rejected_streak;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Full run

struct AnnealerSettings {
  std::uint64_t seed = 40;
  std::size_t iteration_budget = 250;
  double initial_acceptance_probability = 0.5;
  double final_acceptance_probability = 0.0357;
  double cooling_rate = 0.95;
  std::size_t probe_count = 10;
  double return_to_base_probability = 0.5;
  // Outer steps without a better archived error_rate before stopping;
  // 0 disables the rule.
  std::size_t no_improvement_patience = 0;
};

enum class StopReason { BudgetExhausted, BelowFinalTemperature, NoImprovement };

inline const char *to_string(StopReason r) {
  switch (r) {
  case StopReason::BudgetExhausted: return "budget_exhausted";
  case StopReason::BelowFinalTemperature: return "below_final_temperature";
  case StopReason::NoImprovement: return "no_improvement";
  }
  return "?";
}

struct RunResult {
  ParetoArchive archive;
  std::vector<StepRecord> trace;
  CalibrationReport calibration;
  AnnealingSchedule schedule;
  std::size_t outer_steps_run = 0;
  std::size_t evaluations = 0; // evaluator calls, calibration included
  StopReason stop_reason = StopReason::BudgetExhausted;
};

namespace detail {

template <ObjectiveEvaluator E> class CountingEvaluator {
public:
  explicit CountingEvaluator(E &inner) : inner_(inner) {}
  ObjectiveVector evaluate(const Configuration &c) {
    ++calls_;
    return inner_.evaluate(c);
  }
  std::uint64_t max_flops() const { return inner_.max_flops(); }
  std::size_t calls() const noexcept { return calls_; }

private:
  E &inner_;
  std::size_t calls_ = 0;
};

} // namespace detail

/// Multi-objective annealing: calibrate T_init/T_final, plan the schedule,
/// then run outer temperature steps of inner moves, offering every
/// candidate to the archive. Between temperature steps the current solution
/// may return to a random archive member. Stops on budget, on T < T_final,
/// or when the best archived error rate stalls for `no_improvement_patience`
/// temperature steps.
template <ObjectiveEvaluator E>
RunResult run(const SearchSpace &space, const AnnealerSettings &settings, E &evaluator) {
  space.require_searchable();
  if (settings.iteration_budget == 0)
    throw ConfigError("iteration budget must be positive");
  if (!(settings.cooling_rate > 0.0 && settings.cooling_rate < 1.0))
    throw ConfigError("cooling rate must lie in (0,1)");
  if (!(settings.initial_acceptance_probability > 0.0 &&
        settings.initial_acceptance_probability < 1.0))
    throw ConfigError("initial acceptance probability must lie in (0,1)");

  detail::CountingEvaluator<E> counted(evaluator);
  const std::uint64_t flops_max = counted.max_flops();
  if (flops_max == 0)
    throw ConfigError("maximum FLOPs of the space is zero");

  RunResult result;
  AnnealerState state;
  state.rng = Rng(settings.seed);
  result.calibration = calibrate_initial_temperature(
      space, counted, settings.initial_acceptance_probability,
      settings.final_acceptance_probability, settings.probe_count, flops_max, state.rng);
  result.schedule = plan_schedule(result.calibration.t_init, result.calibration.t_final,
                                  settings.cooling_rate, settings.iteration_budget);

  state.current = result.calibration.start;
  state.current_objectives = result.calibration.start_objectives;
  state.temperature = result.schedule.t_init;

  {
    StepRecord init;
    init.kind = StepKind::Init;
    init.temperature = state.temperature;
    init.current = init.candidate = state.current;
    init.current_objectives = init.candidate_objectives = state.current_objectives;
    init.accepted = true;
    init.archive_action =
        result.archive.insert({state.current, state.current_objectives, 0});
    result.trace.push_back(std::move(init));
  }

  const std::size_t outer = result.schedule.executed_outer();
  const std::size_t inner = result.schedule.executed_inner();
  double best_error = result.archive.best_error_rate();
  std::size_t stalled = 0;
  result.stop_reason = StopReason::BelowFinalTemperature;

  for (std::size_t o = 0; o < outer; ++o) {
    if (state.temperature < result.schedule.t_final) {
      result.stop_reason = StopReason::BelowFinalTemperature;
      break;
    }
    if (state.iteration >= settings.iteration_budget) {
      result.stop_reason = StopReason::BudgetExhausted;
      break;
    }
    if (o > 0 && state.rng.bernoulli(settings.return_to_base_probability)) {
      const auto &entries = result.archive.entries();
      const ArchiveEntry &base = entries[state.rng.uniform_index(entries.size())];
      StepRecord rec;
      rec.kind = StepKind::ReturnToBase;
      rec.iteration = state.iteration;
      rec.outer_step = o;
      rec.temperature = state.temperature;
      rec.current = state.current;
      rec.current_objectives = state.current_objectives;
      rec.candidate = base.config;
      rec.candidate_objectives = base.objectives;
      rec.delta_f = scalar_deterioration(state.current_objectives, base.objectives, flops_max);
      rec.accepted = true;
      state.current = base.config;
      state.current_objectives = base.objectives;
      result.trace.push_back(std::move(rec));
    }

    for (std::size_t i = 0; i < inner && state.iteration < settings.iteration_budget; ++i) {
      const Rng before = state.rng;
      try {
        StepRecord rec = step(state, result.schedule, result.archive, counted, space, flops_max);
        rec.outer_step = o;
        result.trace.push_back(std::move(rec));
      } catch (const EvaluationError &e) {
        // The evaluation is spent: advance past the failed candidate.
        state.rng = before;
        StepRecord rec;
        rec.kind = StepKind::EvaluationFailed;
        rec.iteration = state.iteration + 1;
        rec.outer_step = o;
        rec.temperature = state.temperature;
        rec.current = state.current;
        rec.current_objectives = state.current_objectives;
        rec.candidate = neighbor(state.current, space, state.rng);
        rec.error = e.what();
        state.iteration = rec.iteration;
        ++state.rejected_streak;
        result.trace.push_back(std::move(rec));
      }
    }
    result.outer_steps_run = o + 1;

    const double now = result.archive.best_error_rate();
    if (now < best_error) {
      best_error = now;
      stalled = 0;
    } else if (settings.no_improvement_patience > 0 &&
               ++stalled >= settings.no_improvement_patience) {
      result.stop_reason = StopReason::NoImprovement;
      break;
    }
    if (state.iteration >= settings.iteration_budget) {
      result.stop_reason = StopReason::BudgetExhausted;
      break;
    }
    state.temperature = cool(state.temperature, settings.cooling_rate);
  }
  result.evaluations = counted.calls();
  return result;
}

} // namespace sacnn
