#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sacnn/error.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

/// The two minimized criteria: validation error rate and forward-pass FLOPs.
struct ObjectiveVector {
  double error_rate = 0.0;
  std::uint64_t flops = 0;

  bool operator==(const ObjectiveVector &) const = default;
};

inline void validate(const ObjectiveVector &v) {
  if (!(v.error_rate >= 0.0 && v.error_rate <= 1.0))
    throw EvaluationError("error_rate outside [0,1]: " + std::to_string(v.error_rate));
}

/// Pareto dominance with both objectives minimized.
constexpr bool dominates(const ObjectiveVector &a, const ObjectiveVector &b) noexcept {
  const bool no_worse = a.error_rate <= b.error_rate && a.flops <= b.flops;
  const bool better = a.error_rate < b.error_rate || a.flops < b.flops;
  return no_worse && better;
}

/// Single deterioration used by the acceptance test. Both objectives are
/// brought to [0,1] scale (FLOPs divided by the space maximum) and averaged:
///   dF = ((e' - e) + (f' - f) / flops_max) / 2
inline double scalar_deterioration(const ObjectiveVector &current,
                                   const ObjectiveVector &candidate,
                                   std::uint64_t flops_max) {
  if (flops_max == 0)
    throw ConfigError("flops normalizer must be positive");
  const double d_err = candidate.error_rate - current.error_rate;
  const double d_flops = (static_cast<double>(candidate.flops) -
                          static_cast<double>(current.flops)) /
                         static_cast<double>(flops_max);
  return 0.5 * (d_err + d_flops);
}

struct ArchiveEntry {
  Configuration config;
  ObjectiveVector objectives;
  std::size_t iteration_found = 0;

  bool operator==(const ArchiveEntry &) const = default;
};

enum class InsertResult { Added, RejectedDominated };

inline const char *to_string(InsertResult r) {
  return r == InsertResult::Added ? "added" : "rejected_dominated";
}

/// Report ordering: error_rate, then flops, then configuration.
inline bool front_order(const ArchiveEntry &a, const ArchiveEntry &b) {
  if (a.objectives.error_rate != b.objectives.error_rate)
    return a.objectives.error_rate < b.objectives.error_rate;
  if (a.objectives.flops != b.objectives.flops)
    return a.objectives.flops < b.objectives.flops;
  return a.config < b.config;
}

/// External archive of mutually non-dominated solutions. Entries with equal
/// objectives but different configurations coexist; a configuration is
/// never stored twice.
class ParetoArchive {
public:
  InsertResult insert(ArchiveEntry candidate) {
    for (const auto &e : entries_)
      if (dominates(e.objectives, candidate.objectives) || e.config == candidate.config)
        return InsertResult::RejectedDominated;
    std::erase_if(entries_, [&](const ArchiveEntry &e) {
      return dominates(candidate.objectives, e.objectives);
    });
    entries_.push_back(std::move(candidate));
    return InsertResult::Added;
  }

  const std::vector<ArchiveEntry> &entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double best_error_rate() const {
    double best = 1.0;
    for (const auto &e : entries_)
      best = std::min(best, e.objectives.error_rate);
    return best;
  }

  bool contains(const Configuration &config) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const ArchiveEntry &e) { return e.config == config; });
  }

private:
  std::vector<ArchiveEntry> entries_;
};

inline std::vector<ArchiveEntry> front(const ParetoArchive &archive) {
  std::vector<ArchiveEntry> out = archive.entries();
  std::sort(out.begin(), out.end(), front_order);
  return out;
}

/// Exact front of a finite set by pairwise comparison; duplicate
/// configurations keep their first occurrence. Sorted like front().
inline std::vector<ArchiveEntry> exhaustive_front(const std::vector<ArchiveEntry> &points) {
  std::vector<ArchiveEntry> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (dominates(points[j].objectives, points[i].objectives))
        keep = false;
      else if (j < i && points[j].config == points[i].config)
        keep = false;
    }
    if (keep)
      out.push_back(points[i]);
  }
  std::sort(out.begin(), out.end(), front_order);
  return out;
}

} // namespace sacnn
