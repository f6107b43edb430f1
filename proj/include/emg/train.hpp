#pragma once

// Training: seeded init, full-batch gradient descent on mean cross-entropy,
// per-feature standardization fitted on the training split, early stopping
// on validation loss. Deterministic for a fixed dataset and seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "emg/network.hpp"
#include "emg/synth.hpp"  // detail::SplitMix64
#include "emg/types.hpp"

namespace emg {

struct Dataset {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;  // class ordinals

  std::size_t size() const { return features.size(); }
  void add(std::vector<double> f, int label) {
    features.push_back(std::move(f));
    labels.push_back(label);
  }
};

struct TrainConfig {
  int max_epochs = 600;
  double learning_rate = 0.25;
  double validation_fraction = 0.15;
  double test_fraction = 0.15;
  int patience = 40;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct NetworkSpec {
  std::uint32_t input_dim = 0;
  std::uint32_t hidden_dim = 10;
  std::uint32_t output_dim = kGestureCount;
  FeaturePath path = FeaturePath::TimeDomain;
  std::string feature_order;
  std::vector<std::string> class_names;  // empty -> gesture names or class<i>
  std::optional<BinSelection> bin_selection;
};

struct Gradients {
  std::vector<double> w1, b1, w2, b2;
};

struct TrainReport {
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t train_count = 0;
  std::size_t validation_count = 0;
  std::size_t test_count = 0;
  int epochs_run = 0;
  double wall_time_s = 0.0;
  double final_train_loss = 0.0;
  double best_validation_loss = 0.0;  // 0 when there is no validation split
};

struct TrainResult {
  Network network;
  TrainReport report;
};

namespace detail {

inline void validate_batch(const Network& net, const Dataset& data) {
  if (data.size() == 0) throw Error("empty batch");
  if (data.labels.size() != data.features.size())
    throw Error("dataset features and labels disagree in length");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.features[i].size() != net.input_dim)
      throw Error("feature dimension mismatch at example " + std::to_string(i) +
                  ": network expects " + std::to_string(net.input_dim) +
                  ", got " + std::to_string(data.features[i].size()));
    if (data.labels[i] < 0 || data.labels[i] >= static_cast<int>(net.output_dim))
      throw Error("label out of range at example " + std::to_string(i));
  }
}

// Forward pass keeping intermediates; logits are pre-softmax.
struct ForwardScratch {
  std::vector<double> x_hat, hidden, logits, probabilities;
};

inline void forward_scratch(const Network& net, std::span<const double> features,
                            ForwardScratch& s) {
  s.x_hat.resize(net.input_dim);
  s.hidden.resize(net.hidden_dim);
  s.logits.resize(net.output_dim);
  for (std::uint32_t i = 0; i < net.input_dim; ++i) {
    const double v = features[i];
    if (!std::isfinite(v)) throw Error("non-finite feature value");
    s.x_hat[i] = (v - net.norm.mean[i]) / net.norm.stddev[i];
  }
  for (std::uint32_t h = 0; h < net.hidden_dim; ++h) {
    double z = net.b1[h];
    const double* row = net.w1.data() + std::size_t{h} * net.input_dim;
    for (std::uint32_t i = 0; i < net.input_dim; ++i) z += row[i] * s.x_hat[i];
    s.hidden[h] = std::tanh(z);
  }
  for (std::uint32_t o = 0; o < net.output_dim; ++o) {
    double z = net.b2[o];
    const double* row = net.w2.data() + std::size_t{o} * net.hidden_dim;
    for (std::uint32_t h = 0; h < net.hidden_dim; ++h) z += row[h] * s.hidden[h];
    s.logits[o] = z;
  }
  s.probabilities = s.logits;
  softmax_inplace(s.probabilities);
}

// Cross-entropy via log-sum-exp, stable for large logits.
inline double example_loss(std::span<const double> logits, int label) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : logits) max_logit = std::max(max_logit, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - max_logit);
  return max_logit + std::log(sum) - logits[label];
}

inline double subset_loss(const Network& net, const Dataset& data,
                          std::span<const std::size_t> idx) {
  ForwardScratch s;
  double total = 0.0;
  for (std::size_t i : idx) {
    forward_scratch(net, data.features[i], s);
    total += example_loss(s.logits, data.labels[i]);
  }
  return total / static_cast<double>(idx.size());
}

inline Gradients subset_gradient(const Network& net, const Dataset& data,
                                 std::span<const std::size_t> idx) {
  Gradients g;
  g.w1.assign(net.w1.size(), 0.0);
  g.b1.assign(net.b1.size(), 0.0);
  g.w2.assign(net.w2.size(), 0.0);
  g.b2.assign(net.b2.size(), 0.0);
  const double inv_batch = 1.0 / static_cast<double>(idx.size());
  ForwardScratch s;
  std::vector<double> delta_out(net.output_dim);
  std::vector<double> delta_hidden(net.hidden_dim);
  for (std::size_t i : idx) {
    forward_scratch(net, data.features[i], s);
    for (std::uint32_t o = 0; o < net.output_dim; ++o)
      delta_out[o] = s.probabilities[o] * inv_batch;
    delta_out[data.labels[i]] -= inv_batch;

    for (std::uint32_t o = 0; o < net.output_dim; ++o) {
      g.b2[o] += delta_out[o];
      double* row = g.w2.data() + std::size_t{o} * net.hidden_dim;
      for (std::uint32_t h = 0; h < net.hidden_dim; ++h)
        row[h] += delta_out[o] * s.hidden[h];
    }
    for (std::uint32_t h = 0; h < net.hidden_dim; ++h) {
      double acc = 0.0;
      for (std::uint32_t o = 0; o < net.output_dim; ++o)
        acc += net.w2[std::size_t{o} * net.hidden_dim + h] * delta_out[o];
      delta_hidden[h] = acc * (1.0 - s.hidden[h] * s.hidden[h]);
    }
    for (std::uint32_t h = 0; h < net.hidden_dim; ++h) {
      g.b1[h] += delta_hidden[h];
      double* row = g.w1.data() + std::size_t{h} * net.input_dim;
      for (std::uint32_t i2 = 0; i2 < net.input_dim; ++i2)
        row[i2] += delta_hidden[h] * s.x_hat[i2];
    }
  }
  return g;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace detail

// Mean cross-entropy of the batch under the network's frozen normalization.
inline double batch_loss(const Network& net, const Dataset& batch) {
  detail::validate_batch(net, batch);
  const auto idx = detail::all_indices(batch.size());
  return detail::subset_loss(net, batch, idx);
}

// Exact backpropagation gradients of the mean cross-entropy over the batch.
inline Gradients gradient(const Network& net, const Dataset& batch) {
  detail::validate_batch(net, batch);
  const auto idx = detail::all_indices(batch.size());
  return detail::subset_gradient(net, batch, idx);
}

// Seeded init: weights uniform in [-0.5, 0.5] scaled by 1/sqrt(fan-in),
// biases zero.
inline Network init_network(const NetworkSpec& spec, std::uint64_t seed) {
  if (spec.input_dim == 0 || spec.hidden_dim == 0 || spec.output_dim == 0)
    throw Error("network spec has a zero-sized layer");
  Network net;
  net.input_dim = spec.input_dim;
  net.hidden_dim = spec.hidden_dim;
  net.output_dim = spec.output_dim;
  net.path = spec.path;
  net.feature_order = spec.feature_order;
  net.bin_selection = spec.bin_selection;
  net.class_names = spec.class_names;
  if (net.class_names.empty()) {
    if (spec.output_dim == kGestureCount) {
      net.class_names = gesture_names();
    } else {
      for (std::uint32_t i = 0; i < spec.output_dim; ++i)
        net.class_names.push_back("class" + std::to_string(i));
    }
  }
  net.norm.mean.assign(spec.input_dim, 0.0);
  net.norm.stddev.assign(spec.input_dim, 1.0);

  detail::SplitMix64 rng{detail::mix_seed(seed, 0x57e1, 0x9a7b)};
  const double scale1 = 1.0 / std::sqrt(static_cast<double>(spec.input_dim));
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(spec.hidden_dim));
  net.w1.resize(std::size_t{spec.hidden_dim} * spec.input_dim);
  for (double& w : net.w1) w = rng.uniform(-0.5, 0.5) * scale1;
  net.b1.assign(spec.hidden_dim, 0.0);
  net.w2.resize(std::size_t{spec.output_dim} * spec.hidden_dim);
  for (double& w : net.w2) w = rng.uniform(-0.5, 0.5) * scale2;
  net.b2.assign(spec.output_dim, 0.0);
  return net;
}

// Deterministic stratified split into train/validation/test index sets.
inline std::array<std::vector<std::size_t>, 3> stratified_split(
    const std::vector<int>& labels, int class_count, double validation_fraction,
    double test_fraction, std::uint64_t seed, bool shuffle) {
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(i);

  std::array<std::vector<std::size_t>, 3> out;  // train, val, test
  for (int c = 0; c < class_count; ++c) {
    auto& members = by_class[c];
    if (shuffle) {
      detail::SplitMix64 rng{
          detail::mix_seed(seed, 0x51u, static_cast<std::uint64_t>(c))};
      for (std::size_t i = members.size(); i > 1; --i)
        std::swap(members[i - 1], members[rng.next() % i]);
    }
    const auto n = members.size();
    const auto n_val =
        static_cast<std::size_t>(std::floor(validation_fraction * static_cast<double>(n)));
    const auto n_test =
        static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n_val)
        out[1].push_back(members[i]);
      else if (i < n_val + n_test)
        out[2].push_back(members[i]);
      else
        out[0].push_back(members[i]);
    }
  }
  for (auto& part : out) std::sort(part.begin(), part.end());
  return out;
}

namespace detail {

inline double subset_accuracy(const Network& net, const Dataset& data,
                              std::span<const std::size_t> idx) {
  if (idx.empty()) return 1.0;  // vacuous
  ForwardScratch s;
  std::size_t correct = 0;
  for (std::size_t i : idx) {
    forward_scratch(net, data.features[i], s);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.probabilities.size(); ++k)
      if (s.probabilities[k] > s.probabilities[best]) best = k;
    if (static_cast<int>(best) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(idx.size());
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

inline TrainResult train(const Dataset& dataset, const TrainConfig& cfg,
                         const NetworkSpec& spec) {
  if (!(cfg.learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (cfg.max_epochs < 1) throw Error("max_epochs must be at least 1");
  if (cfg.patience < 1) throw Error("patience must be at least 1");
  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0) ||
      !(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0) ||
      cfg.validation_fraction + cfg.test_fraction >= 1.0)
    throw Error("split fractions must lie in (0,1) and sum below 1");
  if (dataset.size() == 0) throw Error("empty training dataset");

  Network net = init_network(spec, cfg.seed);
  detail::validate_batch(net, dataset);

  // Every class must be represented.
  std::vector<std::size_t> class_counts(spec.output_dim, 0);
  for (int label : dataset.labels) ++class_counts[label];
  for (std::uint32_t c = 0; c < spec.output_dim; ++c)
    if (class_counts[c] == 0)
      throw Error("class '" + net.class_names[c] + "' absent from training data");

  const auto splits =
      stratified_split(dataset.labels, static_cast<int>(spec.output_dim),
                       cfg.validation_fraction, cfg.test_fraction, cfg.seed,
                       cfg.shuffle);
  const auto& train_idx = splits[0];
  const auto& val_idx = splits[1];
  const auto& test_idx = splits[2];

  {
    std::vector<bool> in_train(spec.output_dim, false);
    for (std::size_t i : train_idx) in_train[dataset.labels[i]] = true;
    for (std::uint32_t c = 0; c < spec.output_dim; ++c)
      if (!in_train[c])
        throw Error("class '" + net.class_names[c] +
                    "' absent from training split");
  }

  // Per-feature standardization on the training split only.
  for (std::uint32_t f = 0; f < spec.input_dim; ++f) {
    double sum = 0.0;
    for (std::size_t i : train_idx) sum += dataset.features[i][f];
    const double mu = sum / static_cast<double>(train_idx.size());
    double ss = 0.0;
    for (std::size_t i : train_idx) {
      const double d = dataset.features[i][f] - mu;
      ss += d * d;
    }
    const double sd = train_idx.size() > 1
                          ? std::sqrt(ss / static_cast<double>(train_idx.size() - 1))
                          : 0.0;
    net.norm.mean[f] = mu;
    net.norm.stddev[f] = sd > 1e-12 ? sd : 1.0;
  }

  const auto start = std::chrono::steady_clock::now();
  double best_val_loss = std::numeric_limits<double>::infinity();
  Network best = net;
  int epochs_since_best = 0;
  int epochs_run = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const Gradients g = detail::subset_gradient(net, dataset, train_idx);
    for (std::size_t i = 0; i < net.w1.size(); ++i)
      net.w1[i] -= cfg.learning_rate * g.w1[i];
    for (std::size_t i = 0; i < net.b1.size(); ++i)
      net.b1[i] -= cfg.learning_rate * g.b1[i];
    for (std::size_t i = 0; i < net.w2.size(); ++i)
      net.w2[i] -= cfg.learning_rate * g.w2[i];
    for (std::size_t i = 0; i < net.b2.size(); ++i)
      net.b2[i] -= cfg.learning_rate * g.b2[i];
    epochs_run = epoch;

    if (!detail::all_finite(net.w1) || !detail::all_finite(net.b1) ||
        !detail::all_finite(net.w2) || !detail::all_finite(net.b2))
      throw Error("training diverged: non-finite weights at epoch " +
                  std::to_string(epoch));

    if (!val_idx.empty()) {
      const double val_loss = detail::subset_loss(net, dataset, val_idx);
      if (!std::isfinite(val_loss))
        throw Error("training diverged: non-finite validation loss at epoch " +
                    std::to_string(epoch));
      if (val_loss < best_val_loss) {
        best_val_loss = val_loss;
        best = net;
        epochs_since_best = 0;
      } else if (++epochs_since_best >= cfg.patience) {
        break;
      }
    }
  }
  if (!val_idx.empty()) net = std::move(best);
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();

  TrainResult result;
  result.report.train_accuracy = detail::subset_accuracy(net, dataset, train_idx);
  result.report.validation_accuracy =
      detail::subset_accuracy(net, dataset, val_idx);
  result.report.test_accuracy = detail::subset_accuracy(net, dataset, test_idx);
  result.report.train_count = train_idx.size();
  result.report.validation_count = val_idx.size();
  result.report.test_count = test_idx.size();
  result.report.epochs_run = epochs_run;
  result.report.wall_time_s = std::max(elapsed, 1e-9);
  result.report.final_train_loss = detail::subset_loss(net, dataset, train_idx);
  result.report.best_validation_loss =
      val_idx.empty() ? 0.0 : best_val_loss;
  result.network = std::move(net);
  validate(result.network);
  return result;
}

}  // namespace emg
