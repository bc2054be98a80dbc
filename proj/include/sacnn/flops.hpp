#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sacnn/error.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

inline constexpr std::array<std::size_t, 3> kWindowSizes{3, 4, 5};

/// Geometry of the network input that FLOPs depend on besides the
/// configuration itself.
struct InputShape {
  std::size_t sentence_length = 20; // n
  std::size_t embedding_dim = 50;   // k
  std::size_t class_count = 2;      // C
};

struct FlopsBreakdown {
  std::vector<std::uint64_t> conv_flops; // one per window, in kWindowSizes order
  std::uint64_t fc_flops = 0;
  std::uint64_t total = 0;
};

/// f filters of height w over an n x k input: (n - w + 1) positions, each a
/// w*k dot product counted as one multiply and one add per element.
inline std::uint64_t conv_flops(std::uint64_t filters, std::uint64_t window,
                                std::uint64_t sentence_length, std::uint64_t embedding_dim) {
  if (window > sentence_length)
    throw ConfigError("window " + std::to_string(window) +
                      " is longer than the sentence length " +
                      std::to_string(sentence_length));
  return filters * (sentence_length - window + 1) * (2 * window * embedding_dim);
}

/// Pooled features -> hidden(units) -> classes.
inline std::uint64_t fc_flops(std::uint64_t features, std::uint64_t units,
                              std::uint64_t classes) {
  return 2 * features * units + 2 * units * classes;
}

struct Architecture {
  std::array<std::size_t, 3> filters{}; // per window in kWindowSizes order
  std::size_t units = 0;
};

inline Architecture architecture_of(const SearchSpace &space, const Configuration &config) {
  namespace n = domain_names;
  Architecture a;
  a.filters[0] = static_cast<std::size_t>(value_of(space, config, n::kernel_count_3).as_int());
  a.filters[1] = static_cast<std::size_t>(value_of(space, config, n::kernel_count_4).as_int());
  a.filters[2] = static_cast<std::size_t>(value_of(space, config, n::kernel_count_5).as_int());
  a.units = static_cast<std::size_t>(value_of(space, config, n::unit_count).as_int());
  return a;
}

/// Pooling, dropout and activation costs are not counted.
inline FlopsBreakdown estimate_flops(const Architecture &arch, const InputShape &shape) {
  FlopsBreakdown b;
  std::uint64_t features = 0;
  for (std::size_t i = 0; i < kWindowSizes.size(); ++i) {
    b.conv_flops.push_back(conv_flops(arch.filters[i], kWindowSizes[i],
                                      shape.sentence_length, shape.embedding_dim));
    features += arch.filters[i];
  }
  b.fc_flops = fc_flops(features, arch.units, shape.class_count);
  b.total = std::accumulate(b.conv_flops.begin(), b.conv_flops.end(), b.fc_flops);
  return b;
}

inline FlopsBreakdown estimate_flops(const SearchSpace &space, const Configuration &config,
                                     const InputShape &shape) {
  return estimate_flops(architecture_of(space, config), shape);
}

/// The configuration with every filter count and the unit count at their
/// largest value. FLOPs are monotone in those, so this is the space maximum.
inline Configuration max_flops_configuration(const SearchSpace &space) {
  namespace n = domain_names;
  std::vector<std::size_t> idx(space.size(), 0);
  for (auto name : {n::kernel_count_3, n::kernel_count_4, n::kernel_count_5, n::unit_count}) {
    auto d = space.index_of(name);
    if (!d)
      throw ConfigError("search space has no domain '" + std::string(name) + "'");
    const auto &values = space[*d].values();
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i].as_double() > values[best].as_double())
        best = i;
    idx[*d] = best;
  }
  return Configuration(std::move(idx));
}

inline std::uint64_t max_flops(const SearchSpace &space, const InputShape &shape) {
  return estimate_flops(space, max_flops_configuration(space), shape).total;
}

} // namespace sacnn
