#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sacnn/corpus.hpp"
#include "sacnn/error.hpp"
#include "sacnn/flops.hpp"
#include "sacnn/random.hpp"
#include "sacnn/search_space.hpp"

namespace sacnn {

enum class Activation { Relu, LeakyRelu, Elu, Tanh, Linear };

inline constexpr double kLeakyReluSlope = 0.01;
inline constexpr double kEluAlpha = 1.0;

inline Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  if (name == "elu") return Activation::Elu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "linear") return Activation::Linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

inline std::string_view to_string(Activation a) {
  switch (a) {
  case Activation::Relu: return "relu";
  case Activation::LeakyRelu: return "leaky_relu";
  case Activation::Elu: return "elu";
  case Activation::Tanh: return "tanh";
  case Activation::Linear: return "linear";
  }
  return "?";
}

inline double activate(Activation a, double z) {
  switch (a) {
  case Activation::Relu: return z > 0.0 ? z : 0.0;
  case Activation::LeakyRelu: return z > 0.0 ? z : kLeakyReluSlope * z;
  case Activation::Elu: return z > 0.0 ? z : kEluAlpha * std::expm1(z);
  case Activation::Tanh: return std::tanh(z);
  case Activation::Linear: return z;
  }
  return z;
}

inline double activate_derivative(Activation a, double z) {
  switch (a) {
  case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
  case Activation::LeakyRelu: return z > 0.0 ? 1.0 : kLeakyReluSlope;
  case Activation::Elu: return z > 0.0 ? 1.0 : kEluAlpha * std::exp(z);
  case Activation::Tanh: {
    const double t = std::tanh(z);
    return 1.0 - t * t;
  }
  case Activation::Linear: return 1.0;
  }
  return 1.0;
}

/// Dense row-major tensor.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims) : shape(std::move(dims)) {
    data.assign(std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                std::multiplies<>()),
                0.0);
  }

  std::size_t size() const noexcept { return data.size(); }
  double &operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  std::span<double> row(std::size_t r) {
    return {data.data() + r * shape.back(), shape.back()};
  }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * shape.back(), shape.back()};
  }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool operator==(const Tensor &) const = default;
};

/// Everything the architecture depends on.
struct TextCnnSpec {
  std::size_t vocab_size = 0;
  std::size_t embedding_dim = 50;
  std::array<std::size_t, 3> filters{100, 100, 100}; // windows 3, 4, 5
  std::size_t units = 64;
  std::size_t class_count = 2;
  Activation activation = Activation::Relu;
  double conv_dropout = 0.5;
  double fc_dropout = 0.5;

  std::size_t features() const { return filters[0] + filters[1] + filters[2]; }
  bool operator==(const TextCnnSpec &) const = default;
};

/// Trainable tensors. Gradients and optimizer state use the same layout.
struct Parameters {
  Tensor embedding;                 // vocab x k
  std::array<Tensor, 3> conv_weights; // f_w x (w*k)
  std::array<Tensor, 3> conv_bias;    // f_w
  Tensor hidden_weights;            // features x units
  Tensor hidden_bias;               // units
  Tensor output_weights;            // units x classes
  Tensor output_bias;               // classes

  static Parameters zeros_like(const TextCnnSpec &s) {
    Parameters p;
    p.embedding = Tensor({s.vocab_size, s.embedding_dim});
    for (std::size_t i = 0; i < 3; ++i) {
      p.conv_weights[i] = Tensor({s.filters[i], kWindowSizes[i] * s.embedding_dim});
      p.conv_bias[i] = Tensor({s.filters[i]});
    }
    p.hidden_weights = Tensor({s.features(), s.units});
    p.hidden_bias = Tensor({s.units});
    p.output_weights = Tensor({s.units, s.class_count});
    p.output_bias = Tensor({s.class_count});
    return p;
  }

  template <class F> void for_each(F &&f) {
    f("embedding", embedding);
    for (std::size_t i = 0; i < 3; ++i) {
      f("conv_weights_" + std::to_string(kWindowSizes[i]), conv_weights[i]);
      f("conv_bias_" + std::to_string(kWindowSizes[i]), conv_bias[i]);
    }
    f("hidden_weights", hidden_weights);
    f("hidden_bias", hidden_bias);
    f("output_weights", output_weights);
    f("output_bias", output_bias);
  }

  template <class F> void for_each(F &&f) const {
    const_cast<Parameters *>(this)->for_each(
        [&](const std::string &name, Tensor &t) { f(name, static_cast<const Tensor &>(t)); });
  }

  bool operator==(const Parameters &) const = default;
};

struct TextCnnModel {
  TextCnnSpec spec;
  Parameters params;

  bool operator==(const TextCnnModel &) const = default;
};

/// Architecture and training knobs carried by a configuration.
struct ConfiguredHyperparameters {
  std::array<std::size_t, 3> filters{};
  std::size_t units = 0;
  Activation activation = Activation::Relu;
  double conv_dropout = 0.0;
  double fc_dropout = 0.0;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
};

inline ConfiguredHyperparameters hyperparameters_of(const SearchSpace &space,
                                                    const Configuration &config) {
  namespace n = domain_names;
  validate(space, config);
  ConfiguredHyperparameters h;
  const Architecture arch = architecture_of(space, config);
  h.filters = arch.filters;
  h.units = arch.units;
  h.activation = parse_activation(value_of(space, config, n::activation).text());
  h.conv_dropout = value_of(space, config, n::conv_dropout).as_double();
  h.fc_dropout = value_of(space, config, n::fc_dropout).as_double();
  if (space.index_of(n::learning_rate))
    h.learning_rate = value_of(space, config, n::learning_rate).as_double();
  if (space.index_of(n::batch_size))
    h.batch_size = static_cast<std::size_t>(value_of(space, config, n::batch_size).as_int());
  return h;
}

inline TextCnnSpec make_spec(const ConfiguredHyperparameters &h, std::size_t vocab_size,
                             std::size_t embedding_dim, std::size_t class_count) {
  TextCnnSpec s;
  s.vocab_size = vocab_size;
  s.embedding_dim = embedding_dim;
  s.filters = h.filters;
  s.units = h.units;
  s.class_count = class_count;
  s.activation = h.activation;
  s.conv_dropout = h.conv_dropout;
  s.fc_dropout = h.fc_dropout;
  return s;
}

inline double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

inline void fill_uniform(Tensor &t, double bound, Rng &rng) {
  for (auto &v : t.data)
    v = rng.uniform(-bound, bound);
}

/// Xavier-uniform weights, zero biases, embedding uniform(-0.25, 0.25).
inline TextCnnModel init_model(const TextCnnSpec &spec, Rng &rng) {
  if (spec.vocab_size < 2 || spec.embedding_dim == 0 || spec.units == 0 ||
      spec.class_count < 2 || spec.features() == 0)
    throw ConfigError("invalid Text-CNN dimensions");
  for (double r : {spec.conv_dropout, spec.fc_dropout})
    if (!(r >= 0.0 && r < 1.0))
      throw ConfigError("dropout rate must lie in [0,1)");
  TextCnnModel m;
  m.spec = spec;
  m.params = Parameters::zeros_like(spec);
  fill_uniform(m.params.embedding, 0.25, rng);
  for (std::size_t i = 0; i < 3; ++i)
    fill_uniform(m.params.conv_weights[i],
                 xavier_bound(kWindowSizes[i] * spec.embedding_dim, spec.filters[i]), rng);
  fill_uniform(m.params.hidden_weights, xavier_bound(spec.features(), spec.units), rng);
  fill_uniform(m.params.output_weights, xavier_bound(spec.units, spec.class_count), rng);
  return m;
}

// ---------------------------------------------------------------------------
// Forward / loss / backward

struct ForwardCache {
  std::vector<std::int32_t> tokens;
  std::vector<double> input;                    // n x k embedded sentence
  std::array<std::vector<double>, 3> conv_pre;  // f_w x positions, pre-activation
  std::array<std::vector<std::size_t>, 3> argmax;
  std::vector<double> pooled;      // h
  std::vector<double> conv_mask;   // inverted-dropout scale per feature
  std::vector<double> hidden_in;   // h after dropout
  std::vector<double> hidden_pre;
  std::vector<double> hidden_mask;
  std::vector<double> hidden_out;  // after activation and dropout
  std::vector<double> probabilities;
};

namespace detail {

inline std::vector<double> dropout_mask(std::size_t n, double rate, bool train_mode, Rng &rng) {
  std::vector<double> mask(n, 1.0);
  if (!train_mode || rate <= 0.0)
    return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto &m : mask)
    m = rng.uniform01() < rate ? 0.0 : keep_scale;
  return mask;
}

inline void softmax_in_place(std::vector<double> &v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (auto &x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (auto &x : v)
    x /= sum;
}

} // namespace detail

/// Embedding -> per-window convolution + activation -> max over time ->
/// dropout -> hidden layer + activation -> dropout -> softmax.
inline ForwardCache forward(const TextCnnModel &model, std::span<const std::int32_t> tokens,
                            bool train_mode, Rng &rng) {
  const auto &s = model.spec;
  const auto &p = model.params;
  const std::size_t n = tokens.size();
  const std::size_t k = s.embedding_dim;
  if (n < kWindowSizes.back())
    throw ConfigError("sentence shorter than the widest window");
  ForwardCache c;
  c.tokens.assign(tokens.begin(), tokens.end());
  c.input.resize(n * k);
  for (std::size_t t = 0; t < n; ++t) {
    const auto id = tokens[t];
    if (id < 0 || static_cast<std::size_t>(id) >= s.vocab_size)
      throw DataError("token id " + std::to_string(id) + " outside the vocabulary");
    const auto row = p.embedding.row(static_cast<std::size_t>(id));
    std::copy(row.begin(), row.end(), c.input.begin() + static_cast<std::ptrdiff_t>(t * k));
  }

  c.pooled.reserve(s.features());
  for (std::size_t wi = 0; wi < 3; ++wi) {
    const std::size_t w = kWindowSizes[wi];
    const std::size_t positions = n - w + 1;
    const std::size_t span_len = w * k;
    auto &pre = c.conv_pre[wi];
    auto &arg = c.argmax[wi];
    pre.resize(s.filters[wi] * positions);
    arg.resize(s.filters[wi]);
    for (std::size_t f = 0; f < s.filters[wi]; ++f) {
      const auto weights = p.conv_weights[wi].row(f);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_pos = 0;
      for (std::size_t pos = 0; pos < positions; ++pos) {
        const double *x = c.input.data() + pos * k;
        double z = p.conv_bias[wi][f];
        for (std::size_t j = 0; j < span_len; ++j)
          z += weights[j] * x[j];
        pre[f * positions + pos] = z;
        const double a = activate(s.activation, z);
        if (a > best) {
          best = a;
          best_pos = pos;
        }
      }
      arg[f] = best_pos;
      c.pooled.push_back(best);
    }
  }

  const std::size_t features = s.features();
  c.conv_mask = detail::dropout_mask(features, s.conv_dropout, train_mode, rng);
  c.hidden_in.resize(features);
  for (std::size_t i = 0; i < features; ++i)
    c.hidden_in[i] = c.pooled[i] * c.conv_mask[i];

  c.hidden_pre.assign(p.hidden_bias.data.begin(), p.hidden_bias.data.end());
  for (std::size_t i = 0; i < features; ++i) {
    const double x = c.hidden_in[i];
    if (x == 0.0)
      continue;
    const auto row = p.hidden_weights.row(i);
    for (std::size_t u = 0; u < s.units; ++u)
      c.hidden_pre[u] += x * row[u];
  }
  c.hidden_mask = detail::dropout_mask(s.units, s.fc_dropout, train_mode, rng);
  c.hidden_out.resize(s.units);
  for (std::size_t u = 0; u < s.units; ++u)
    c.hidden_out[u] = activate(s.activation, c.hidden_pre[u]) * c.hidden_mask[u];

  c.probabilities.assign(p.output_bias.data.begin(), p.output_bias.data.end());
  for (std::size_t u = 0; u < s.units; ++u) {
    const auto row = p.output_weights.row(u);
    for (std::size_t cl = 0; cl < s.class_count; ++cl)
      c.probabilities[cl] += c.hidden_out[u] * row[cl];
  }
  detail::softmax_in_place(c.probabilities);
  return c;
}

/// Cross-entropy -ln p[label], probability clamped at 1e-12.
inline double loss(std::span<const double> probabilities, std::size_t label) {
  return -std::log(std::max(probabilities[label], 1e-12));
}

/// Adds d loss / d parameter for one sample to `grads`.
inline void accumulate_gradients(const TextCnnModel &model, const ForwardCache &c,
                                 std::size_t label, Parameters &grads) {
  const auto &s = model.spec;
  const auto &p = model.params;
  const std::size_t k = s.embedding_dim;
  const std::size_t n = c.tokens.size();

  std::vector<double> g_logits = c.probabilities;
  g_logits[label] -= 1.0;
  for (std::size_t cl = 0; cl < s.class_count; ++cl)
    grads.output_bias[cl] += g_logits[cl];

  std::vector<double> g_hidden_pre(s.units, 0.0);
  for (std::size_t u = 0; u < s.units; ++u) {
    const auto w_row = p.output_weights.row(u);
    auto g_row = grads.output_weights.row(u);
    double g_out = 0.0;
    for (std::size_t cl = 0; cl < s.class_count; ++cl) {
      g_row[cl] += c.hidden_out[u] * g_logits[cl];
      g_out += w_row[cl] * g_logits[cl];
    }
    g_hidden_pre[u] = g_out * c.hidden_mask[u] * activate_derivative(s.activation, c.hidden_pre[u]);
    grads.hidden_bias[u] += g_hidden_pre[u];
  }

  const std::size_t features = s.features();
  std::vector<double> g_pooled(features, 0.0);
  for (std::size_t i = 0; i < features; ++i) {
    const auto w_row = p.hidden_weights.row(i);
    auto g_row = grads.hidden_weights.row(i);
    double g_in = 0.0;
    for (std::size_t u = 0; u < s.units; ++u) {
      g_row[u] += c.hidden_in[i] * g_hidden_pre[u];
      g_in += w_row[u] * g_hidden_pre[u];
    }
    g_pooled[i] = g_in * c.conv_mask[i];
  }

  std::vector<double> g_input(n * k, 0.0);
  std::size_t feature = 0;
  for (std::size_t wi = 0; wi < 3; ++wi) {
    const std::size_t w = kWindowSizes[wi];
    const std::size_t positions = n - w + 1;
    const std::size_t span_len = w * k;
    for (std::size_t f = 0; f < s.filters[wi]; ++f, ++feature) {
      if (g_pooled[feature] == 0.0)
        continue;
      const std::size_t pos = c.argmax[wi][f];
      const double g_z = g_pooled[feature] *
                         activate_derivative(s.activation, c.conv_pre[wi][f * positions + pos]);
      grads.conv_bias[wi][f] += g_z;
      const auto weights = p.conv_weights[wi].row(f);
      auto g_weights = grads.conv_weights[wi].row(f);
      const double *x = c.input.data() + pos * k;
      double *gx = g_input.data() + pos * k;
      for (std::size_t j = 0; j < span_len; ++j) {
        g_weights[j] += g_z * x[j];
        gx[j] += g_z * weights[j];
      }
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    auto g_row = grads.embedding.row(static_cast<std::size_t>(c.tokens[t]));
    for (std::size_t d = 0; d < k; ++d)
      g_row[d] += g_input[t * k + d];
  }
}

inline Parameters backward(const TextCnnModel &model, const ForwardCache &cache,
                           std::size_t label) {
  Parameters g = Parameters::zeros_like(model.spec);
  accumulate_gradients(model, cache, label, g);
  return g;
}

inline std::size_t predict(const TextCnnModel &model, std::span<const std::int32_t> tokens) {
  Rng unused(0);
  const auto c = forward(model, tokens, false, unused);
  return static_cast<std::size_t>(
      std::max_element(c.probabilities.begin(), c.probabilities.end()) - c.probabilities.begin());
}

inline double accuracy(const TextCnnModel &model, const std::vector<Example> &examples) {
  if (examples.empty())
    throw DataError("cannot measure accuracy on an empty split");
  std::size_t correct = 0;
  for (const auto &e : examples)
    correct += predict(model, e.ids) == e.label;
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

// ---------------------------------------------------------------------------
// Training

struct TrainingSettings {
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 20;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;
  std::uint64_t seed = 40;
};

/// acc <- decay * acc + (1 - decay) g^2;  theta <- theta - lr * g / sqrt(acc + eps)
class RmsProp {
public:
  RmsProp(const TextCnnSpec &spec, double learning_rate, double decay, double epsilon)
      : accumulators_(Parameters::zeros_like(spec)), learning_rate_(learning_rate),
        decay_(decay), epsilon_(epsilon) {}

  void update(Parameters &params, Parameters &grads) {
    std::vector<Tensor *> acc;
    accumulators_.for_each([&](const std::string &, Tensor &t) { acc.push_back(&t); });
    std::vector<Tensor *> g;
    grads.for_each([&](const std::string &, Tensor &t) { g.push_back(&t); });
    std::size_t i = 0;
    params.for_each([&](const std::string &, Tensor &theta) {
      update_tensor(theta.data, g[i]->data, acc[i]->data);
      ++i;
    });
  }

  void update_tensor(std::span<double> theta, std::span<const double> grad,
                     std::span<double> acc) const {
    for (std::size_t j = 0; j < theta.size(); ++j) {
      acc[j] = decay_ * acc[j] + (1.0 - decay_) * grad[j] * grad[j];
      theta[j] -= learning_rate_ * grad[j] / std::sqrt(acc[j] + epsilon_);
    }
  }

private:
  Parameters accumulators_;
  double learning_rate_;
  double decay_;
  double epsilon_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_accuracy = 0.0;

  bool operator==(const EpochRecord &) const = default;
};

struct TrainingResult {
  TextCnnModel model; // snapshot with the best validation accuracy
  std::vector<EpochRecord> history;
  double best_validation_accuracy = 0.0;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

/// Receives the validation-accuracy history after each epoch; true stops.
using StopRule = std::function<bool(const std::vector<double> &)>;

inline TrainingResult train(TextCnnModel model, const std::vector<Example> &train_split,
                            const std::vector<Example> &validation_split,
                            const TrainingSettings &settings, const StopRule &stop = {}) {
  if (train_split.empty() || validation_split.empty())
    throw DataError("training needs non-empty train and validation splits");
  if (settings.batch_size == 0 || settings.max_epochs == 0 || settings.learning_rate < 0.0)
    throw ConfigError("invalid training settings");

  Rng rng(settings.seed);
  RmsProp optimizer(model.spec, settings.learning_rate, settings.rmsprop_decay,
                    settings.rmsprop_epsilon);
  Parameters grads = Parameters::zeros_like(model.spec);
  std::vector<std::size_t> order(train_split.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainingResult result;
  result.model = model;
  result.best_validation_accuracy = -1.0;
  std::vector<double> accuracies;

  for (std::size_t epoch = 1; epoch <= settings.max_epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += settings.batch_size) {
      const std::size_t end = std::min(order.size(), start + settings.batch_size);
      grads.for_each([](const std::string &, Tensor &t) { t.zero(); });
      for (std::size_t b = start; b < end; ++b) {
        const Example &e = train_split[order[b]];
        const ForwardCache cache = forward(model, e.ids, true, rng);
        const double l = loss(cache.probabilities, e.label);
        if (!std::isfinite(l))
          throw EvaluationError("training diverged: non-finite loss at epoch " +
                                std::to_string(epoch));
        loss_sum += l;
        accumulate_gradients(model, cache, e.label, grads);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      grads.for_each([&](const std::string &, Tensor &t) {
        for (auto &v : t.data)
          v *= scale;
      });
      optimizer.update(model.params, grads);
    }
    const double mean_loss = loss_sum / static_cast<double>(order.size());
    if (!std::isfinite(mean_loss))
      throw EvaluationError("training diverged: non-finite loss at epoch " +
                            std::to_string(epoch));
    bool finite = true;
    model.params.for_each([&](const std::string &, const Tensor &t) {
      for (double v : t.data)
        finite = finite && std::isfinite(v);
    });
    if (!finite)
      throw EvaluationError("training diverged: non-finite parameters at epoch " +
                            std::to_string(epoch));

    const double acc = accuracy(model, validation_split);
    accuracies.push_back(acc);
    result.history.push_back({epoch, mean_loss, acc});
    if (acc > result.best_validation_accuracy) {
      result.best_validation_accuracy = acc;
      result.best_epoch = epoch;
      result.model = model;
    }
    if (stop && epoch < settings.max_epochs && stop(accuracies)) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

inline void write_history(std::ostream &out, const std::vector<EpochRecord> &history) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# sacnn-history v1\n";
  os << "epoch\ttrain_loss\tvalidation_accuracy\n";
  for (const auto &h : history)
    os << h.epoch << '\t' << std::setprecision(17) << h.train_loss << '\t'
       << h.validation_accuracy << '\n';
  out << os.str();
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace detail {
inline constexpr std::array<char, 8> kModelMagic{'S', 'A', 'C', 'N', 'M', 'D', 'L', '1'};
inline constexpr std::uint64_t kModelVersion = 1;
} // namespace detail

inline void save_model(std::ostream &out, const TextCnnModel &m) {
  out.write(detail::kModelMagic.data(), detail::kModelMagic.size());
  detail::BinaryWriter w(out);
  w.u64(detail::kModelVersion);
  const auto &s = m.spec;
  w.u64(s.vocab_size);
  w.u64(s.embedding_dim);
  for (auto f : s.filters)
    w.u64(f);
  w.u64(s.units);
  w.u64(s.class_count);
  w.str(std::string(to_string(s.activation)));
  w.f64(s.conv_dropout);
  w.f64(s.fc_dropout);
  m.params.for_each([&](const std::string &name, const Tensor &t) {
    w.str(name);
    w.u64(t.shape.size());
    for (auto d : t.shape)
      w.u64(d);
    for (double v : t.data)
      w.f64(v);
  });
}

inline TextCnnModel load_model(std::istream &in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != detail::kModelMagic)
    throw DataError("not a Text-CNN checkpoint");
  detail::BinaryReader r(in);
  if (r.u64() != detail::kModelVersion)
    throw DataError("unsupported checkpoint version");
  TextCnnModel m;
  auto &s = m.spec;
  s.vocab_size = r.u64();
  s.embedding_dim = r.u64();
  for (auto &f : s.filters)
    f = r.u64();
  s.units = r.u64();
  s.class_count = r.u64();
  s.activation = parse_activation(r.str());
  s.conv_dropout = r.f64();
  s.fc_dropout = r.f64();
  m.params = Parameters::zeros_like(s);
  m.params.for_each([&](const std::string &name, Tensor &t) {
    if (r.str() != name)
      throw DataError("checkpoint tensor order mismatch at '" + name + "'");
    std::vector<std::size_t> shape(r.u64());
    for (auto &d : shape)
      d = r.u64();
    if (shape != t.shape)
      throw DataError("checkpoint shape mismatch for '" + name + "'");
    for (auto &v : t.data)
      v = r.f64();
  });
  return m;
}

} // namespace sacnn
