#pragma once

#include <string>
#include <string_view>

#include "sacnn/flops.hpp"
#include "sacnn/pareto.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

/// Deterministic, instantaneous test objectives. Both use the real FLOPs
/// estimate as the second criterion; only error_rate is synthetic.
enum class SyntheticObjective { SphereProxy, DeceptiveTrap };

inline SyntheticObjective parse_synthetic_objective(std::string_view name) {
  if (name == "sphere_proxy")
    return SyntheticObjective::SphereProxy;
  if (name == "deceptive_trap")
    return SyntheticObjective::DeceptiveTrap;
  throw ConfigError("unknown synthetic objective '" + std::string(name) + "'");
}

inline std::string_view to_string(SyntheticObjective o) {
  return o == SyntheticObjective::SphereProxy ? "sphere_proxy" : "deceptive_trap";
}

namespace detail {

// index / (size - 1) for every domain with at least two values.
inline std::vector<double> index_fractions(const SearchSpace &space,
                                           const Configuration &config) {
  std::vector<double> out;
  for (std::size_t d = 0; d < space.size(); ++d)
    if (space[d].mutable_domain())
      out.push_back(static_cast<double>(config[d]) /
                    static_cast<double>(space[d].size() - 1));
  return out;
}

} // namespace detail

/// sphere_proxy: mean squared index fraction. 0 at the all-first
/// configuration, 1 at the all-last one.
///
/// deceptive_trap: with u the mean index fraction,
///   error = 0.2 + 0.75 u        for u <= 0.8   (wide local basin at u = 0)
///   error = 4 (1 - u)           for u >  0.8   (narrow global optimum at u = 1)
/// The two pieces meet at u = 0.8 with error 0.8.
inline double synthetic_error_rate(SyntheticObjective kind, const SearchSpace &space,
                                   const Configuration &config) {
  validate(space, config);
  const auto fractions = detail::index_fractions(space, config);
  if (fractions.empty())
    return kind == SyntheticObjective::SphereProxy ? 0.0 : 0.2;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double f : fractions) {
    sum += f;
    sum_sq += f * f;
  }
  const double count = static_cast<double>(fractions.size());
  if (kind == SyntheticObjective::SphereProxy)
    return sum_sq / count;
  const double u = sum / count;
  return u <= 0.8 ? 0.2 + 0.75 * u : 4.0 * (1.0 - u);
}

inline ObjectiveVector evaluate_synthetic(SyntheticObjective kind, const SearchSpace &space,
                                          const Configuration &config,
                                          const InputShape &shape = {}) {
  return {synthetic_error_rate(kind, space, config),
          estimate_flops(space, config, shape).total};
}

inline ObjectiveVector evaluate_synthetic(std::string_view name, const SearchSpace &space,
                                          const Configuration &config,
                                          const InputShape &shape = {}) {
  return evaluate_synthetic(parse_synthetic_objective(name), space, config, shape);
}

class SyntheticEvaluator {
public:
  SyntheticEvaluator(SearchSpace space, SyntheticObjective kind, InputShape shape = {})
      : space_(std::move(space)), kind_(kind), shape_(shape) {}

  ObjectiveVector evaluate(const Configuration &config) {
    ++calls_;
    return evaluate_synthetic(kind_, space_, config, shape_);
  }

  std::uint64_t max_flops() const { return sacnn::max_flops(space_, shape_); }
  std::size_t calls() const noexcept { return calls_; }
  const SearchSpace &space() const noexcept { return space_; }

private:
  SearchSpace space_;
  SyntheticObjective kind_;
  InputShape shape_;
  std::size_t calls_ = 0;
};

} // namespace sacnn
