#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sacnn/error.hpp"
#include "sacnn/random.hpp"

namespace sacnn {

/// One categorical value. The original text is kept so that fractional
/// values (dropout, learning rates) survive file round-trips exactly.
class Value {
public:
  enum class Kind { Integer, Decimal, Symbol };

  Value() = default;

  static Value parse(std::string text) {
    if (text.empty())
      throw ConfigError("empty hyperparameter value");
    Value v;
    v.text_ = std::move(text);
    const char *first = v.text_.data();
    const char *last = first + v.text_.size();
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(first, last, i);
        ec == std::errc{} && p == last) {
      v.kind_ = Kind::Integer;
      v.number_ = static_cast<double>(i);
      return v;
    }
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(first, last, d);
        ec == std::errc{} && p == last) {
      v.kind_ = Kind::Decimal;
      v.number_ = d;
      return v;
    }
    v.kind_ = Kind::Symbol;
    return v;
  }

  const std::string &text() const noexcept { return text_; }
  Kind kind() const noexcept { return kind_; }
  bool is_numeric() const noexcept { return kind_ != Kind::Symbol; }

  double as_double() const {
    if (!is_numeric())
      throw ConfigError("value '" + text_ + "' is not numeric");
    return number_;
  }

  std::int64_t as_int() const {
    if (kind_ != Kind::Integer)
      throw ConfigError("value '" + text_ + "' is not an integer");
    return static_cast<std::int64_t>(number_);
  }

  bool operator==(const Value &other) const { return text_ == other.text_; }

private:
  std::string text_;
  Kind kind_ = Kind::Symbol;
  double number_ = 0.0;
};

inline std::vector<Value> parse_values(std::initializer_list<std::string_view> texts) {
  std::vector<Value> out;
  for (auto t : texts)
    out.push_back(Value::parse(std::string(t)));
  return out;
}

class ParamDomain {
public:
  ParamDomain(std::string name, std::vector<Value> values)
      : name_(std::move(name)), values_(std::move(values)) {
    if (name_.empty())
      throw ConfigError("domain name must not be empty");
    if (values_.empty())
      throw ConfigError("domain '" + name_ + "' has no values");
    std::set<std::string> seen;
    for (const auto &v : values_)
      if (!seen.insert(v.text()).second)
        throw ConfigError("domain '" + name_ + "' has duplicate value '" +
                          v.text() + "'");
  }

  const std::string &name() const noexcept { return name_; }
  const std::vector<Value> &values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool mutable_domain() const noexcept { return values_.size() >= 2; }

  std::optional<std::size_t> index_of(std::string_view text) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i].text() == text)
        return i;
    return std::nullopt;
  }

private:
  std::string name_;
  std::vector<Value> values_;
};

class SearchSpace {
public:
  explicit SearchSpace(std::vector<ParamDomain> domains)
      : domains_(std::move(domains)) {
    std::set<std::string> names;
    for (const auto &d : domains_)
      if (!names.insert(d.name()).second)
        throw ConfigError("duplicate domain name '" + d.name() + "'");
  }

  /// A space worth searching has at least two configurations.
  void require_searchable() const {
    if (cardinality() < 2)
      throw ConfigError("search space must contain at least 2 configurations");
  }

  const std::vector<ParamDomain> &domains() const noexcept { return domains_; }
  std::size_t size() const noexcept { return domains_.size(); }
  const ParamDomain &operator[](std::size_t i) const { return domains_.at(i); }

  /// Product of domain sizes, saturated at uint64 max.
  std::uint64_t cardinality() const noexcept {
    std::uint64_t c = 1;
    for (const auto &d : domains_) {
      if (c > std::numeric_limits<std::uint64_t>::max() / d.size())
        return std::numeric_limits<std::uint64_t>::max();
      c *= d.size();
    }
    return c;
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < domains_.size(); ++i)
      if (domains_[i].name() == name)
        return i;
    return std::nullopt;
  }

  const ParamDomain &domain(std::string_view name) const {
    auto i = index_of(name);
    if (!i)
      throw ConfigError("search space has no domain '" + std::string(name) + "'");
    return domains_[*i];
  }

private:
  std::vector<ParamDomain> domains_;
};

/// A concrete assignment: one value index per domain, in domain order.
class Configuration {
public:
  Configuration() = default;
  explicit Configuration(std::vector<std::size_t> indices)
      : indices_(std::move(indices)) {}

  const std::vector<std::size_t> &indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t operator[](std::size_t i) const { return indices_.at(i); }
  void set(std::size_t domain, std::size_t value) { indices_.at(domain) = value; }

  auto operator<=>(const Configuration &) const = default;
  bool operator==(const Configuration &) const = default;

private:
  std::vector<std::size_t> indices_;
};

inline void validate(const SearchSpace &space, const Configuration &config) {
  if (config.size() != space.size())
    throw ConfigError("configuration assigns " + std::to_string(config.size()) +
                      " domains, space has " + std::to_string(space.size()));
  for (std::size_t d = 0; d < space.size(); ++d)
    if (config[d] >= space[d].size())
      throw ConfigError("value index out of range for domain '" +
                        space[d].name() + "'");
}

inline const Value &value_of(const SearchSpace &space, const Configuration &config,
                             std::string_view name) {
  auto d = space.index_of(name);
  if (!d)
    throw ConfigError("search space has no domain '" + std::string(name) + "'");
  return space[*d].values().at(config[*d]);
}

/// Builds a configuration from name -> value text. No gaps, no extras.
inline Configuration
configuration_from_assignments(const SearchSpace &space,
                               const std::map<std::string, std::string> &assignments) {
  for (const auto &[name, _] : assignments)
    if (!space.index_of(name))
      throw ConfigError("unknown hyperparameter '" + name + "'");
  std::vector<std::size_t> indices;
  for (const auto &d : space.domains()) {
    auto it = assignments.find(d.name());
    if (it == assignments.end())
      throw ConfigError("missing hyperparameter '" + d.name() + "'");
    auto idx = d.index_of(it->second);
    if (!idx) {
      // Accept numerically equal spellings ("0.10" for "0.1").
      Value v = Value::parse(it->second);
      if (v.is_numeric())
        for (std::size_t i = 0; i < d.size(); ++i)
          if (d.values()[i].is_numeric() &&
              d.values()[i].as_double() == v.as_double())
            idx = i;
    }
    if (!idx)
      throw ConfigError("value '" + it->second + "' is not in domain '" +
                        d.name() + "'");
    indices.push_back(*idx);
  }
  return Configuration(std::move(indices));
}

inline std::map<std::string, std::string> assignments_of(const SearchSpace &space,
                                                         const Configuration &config) {
  validate(space, config);
  std::map<std::string, std::string> out;
  for (std::size_t d = 0; d < space.size(); ++d)
    out[space[d].name()] = space[d].values()[config[d]].text();
  return out;
}

/// Canonical "name=value;..." text in domain order.
inline std::string to_string(const SearchSpace &space, const Configuration &config) {
  validate(space, config);
  std::string s;
  for (std::size_t d = 0; d < space.size(); ++d) {
    if (d)
      s += ';';
    s += space[d].name();
    s += '=';
    s += space[d].values()[config[d]].text();
  }
  return s;
}

namespace domain_names {
inline constexpr std::string_view kernel_count_3 = "kernelCount3";
inline constexpr std::string_view kernel_count_4 = "kernelCount4";
inline constexpr std::string_view kernel_count_5 = "kernelCount5";
inline constexpr std::string_view conv_dropout = "convDropoutRate";
inline constexpr std::string_view unit_count = "unitCount";
inline constexpr std::string_view fc_dropout = "fcDropoutRate";
inline constexpr std::string_view activation = "activation";
inline constexpr std::string_view learning_rate = "learningRate";
inline constexpr std::string_view batch_size = "batchSize";
} // namespace domain_names

/// The Text-CNN search space: one kernel-count domain per window size
/// (3, 4, 5), dropout on both sides, hidden width, activation, learning
/// rate and batch size. Cardinality 7,717,500.
inline SearchSpace default_search_space() {
  namespace n = domain_names;
  const auto kernels = {"32", "64", "96", "100", "128", "160", "256"};
  std::vector<ParamDomain> d;
  for (auto name : {n::kernel_count_3, n::kernel_count_4, n::kernel_count_5}) {
    std::vector<Value> vs;
    for (auto k : kernels)
      vs.push_back(Value::parse(k));
    d.emplace_back(std::string(name), std::move(vs));
  }
  d.emplace_back(std::string(n::conv_dropout),
                 parse_values({"0.1", "0.2", "0.3", "0.4", "0.5"}));
  d.emplace_back(std::string(n::unit_count),
                 parse_values({"16", "32", "64", "128", "256", "512"}));
  d.emplace_back(std::string(n::fc_dropout),
                 parse_values({"0.1", "0.2", "0.3", "0.4", "0.5"}));
  d.emplace_back(std::string(n::activation),
                 parse_values({"relu", "leaky_relu", "elu", "tanh", "linear"}));
  d.emplace_back(std::string(n::learning_rate),
                 parse_values({"0.0001", "0.001", "0.01", "0.0002", "0.0005",
                               "0.0008", "0.002", "0.004", "0.005", "0.008"}));
  d.emplace_back(std::string(n::batch_size), parse_values({"64", "128", "256"}));
  return SearchSpace(std::move(d));
}

/// Restricts `base`: listed domains keep only the given values (which must
/// belong to the base domain, order as listed); unlisted domains are pinned
/// to their first value.
inline SearchSpace
restrict_space(const SearchSpace &base,
               const std::map<std::string, std::vector<std::string>> &allowed) {
  for (const auto &[name, _] : allowed)
    if (!base.index_of(name))
      throw ConfigError("unknown hyperparameter '" + name + "'");
  std::vector<ParamDomain> out;
  for (const auto &d : base.domains()) {
    auto it = allowed.find(d.name());
    if (it == allowed.end()) {
      out.emplace_back(d.name(), std::vector<Value>{d.values().front()});
      continue;
    }
    std::vector<Value> vs;
    for (const auto &text : it->second) {
      auto idx = d.index_of(text);
      if (!idx)
        throw ConfigError("value '" + text + "' is not in domain '" + d.name() + "'");
      vs.push_back(d.values()[*idx]);
    }
    out.emplace_back(d.name(), std::move(vs));
  }
  return SearchSpace(std::move(out));
}

inline Configuration random_configuration(const SearchSpace &space, Rng &rng) {
  std::vector<std::size_t> idx;
  idx.reserve(space.size());
  for (const auto &d : space.domains())
    idx.push_back(rng.uniform_index(d.size()));
  return Configuration(std::move(idx));
}

/// Single-domain mutation: one uniformly chosen mutable domain moves to a
/// uniformly chosen different value.
inline Configuration neighbor(const Configuration &config, const SearchSpace &space,
                              Rng &rng) {
  validate(space, config);
  std::vector<std::size_t> movable;
  for (std::size_t d = 0; d < space.size(); ++d)
    if (space[d].mutable_domain())
      movable.push_back(d);
  if (movable.empty())
    throw ConfigError("no neighbor exists: every domain has a single value");
  const std::size_t d = movable[rng.uniform_index(movable.size())];
  std::size_t v = rng.uniform_index(space[d].size() - 1);
  if (v >= config[d])
    ++v;
  Configuration out = config;
  out.set(d, v);
  return out;
}

/// Visits every configuration once, in lexicographic order of value indices
/// (last domain varies fastest).
inline void for_each_configuration(const SearchSpace &space, std::uint64_t cap,
                                   const std::function<void(const Configuration &)> &fn) {
  if (space.cardinality() > cap)
    throw ConfigError("search space cardinality " +
                      std::to_string(space.cardinality()) + " exceeds cap " +
                      std::to_string(cap));
  std::vector<std::size_t> idx(space.size(), 0);
  while (true) {
    fn(Configuration(idx));
    std::size_t d = space.size();
    while (d > 0) {
      --d;
      if (++idx[d] < space[d].size())
        break;
      idx[d] = 0;
      if (d == 0)
        return;
    }
    if (space.size() == 0)
      return;
  }
}

inline std::vector<Configuration> enumerate(const SearchSpace &space, std::uint64_t cap) {
  std::vector<Configuration> out;
  for_each_configuration(space, cap, [&](const Configuration &c) { out.push_back(c); });
  return out;
}

} // namespace sacnn
