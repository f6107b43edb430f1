#pragma once

// Two-layer feedforward classifier: affine -> tanh -> affine -> softmax.
// The network carries its frozen preprocessing (per-feature normalization,
// frequency-bin selection) so a persisted model is self-contained.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "emg/features_fd.hpp"
#include "emg/types.hpp"

namespace emg {

enum class FeaturePath : std::uint8_t {
  TimeDomain = 0,
  FrequencyDomain = 1,
};

constexpr std::string_view to_string(FeaturePath path) {
  return path == FeaturePath::TimeDomain ? "td" : "fd";
}

inline std::optional<FeaturePath> feature_path_from_string(std::string_view s) {
  if (s == "td") return FeaturePath::TimeDomain;
  if (s == "fd") return FeaturePath::FrequencyDomain;
  return std::nullopt;
}

// x_hat = (x - mean) / stddev, fitted on the training split and frozen.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline constexpr std::string_view kHiddenTransfer = "tanh";
inline constexpr std::string_view kOutputTransfer = "softmax";

struct Network {
  std::uint32_t input_dim = 0;
  std::uint32_t hidden_dim = 0;
  std::uint32_t output_dim = 0;
  std::vector<double> w1;  // hidden_dim x input_dim, row-major
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // output_dim x hidden_dim, row-major
  std::vector<double> b2;  // output_dim
  Normalization norm;
  FeaturePath path = FeaturePath::TimeDomain;
  std::string feature_order;
  std::vector<std::string> class_names;
  std::optional<BinSelection> bin_selection;  // frequency-domain models only
};

inline void validate(const Network& net) {
  if (net.input_dim == 0 || net.hidden_dim == 0 || net.output_dim == 0)
    throw Error("network has a zero-sized layer");
  if (net.w1.size() != std::size_t{net.hidden_dim} * net.input_dim ||
      net.b1.size() != net.hidden_dim ||
      net.w2.size() != std::size_t{net.output_dim} * net.hidden_dim ||
      net.b2.size() != net.output_dim)
    throw Error("network weight shapes do not match layer dimensions");
  if (net.norm.mean.size() != net.input_dim ||
      net.norm.stddev.size() != net.input_dim)
    throw Error("network normalization does not match input dimension");
  auto all_finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!all_finite(net.w1) || !all_finite(net.b1) || !all_finite(net.w2) ||
      !all_finite(net.b2) || !all_finite(net.norm.mean) ||
      !all_finite(net.norm.stddev))
    throw Error("network contains non-finite parameters");
  for (double s : net.norm.stddev)
    if (!(s > 0.0)) throw Error("normalization stddev must be positive");
  if (net.class_names.size() != net.output_dim)
    throw Error("network class table does not match output dimension");
  if (net.path == FeaturePath::FrequencyDomain && !net.bin_selection)
    throw Error("frequency-domain network is missing its bin selection");
}

inline void softmax_inplace(std::span<double> logits) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : logits) max_logit = std::max(max_logit, v);
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - max_logit);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

// Probabilities for an arbitrary-dimension network (used directly by the
// training internals and gradient checks).
inline std::vector<double> forward_probabilities(const Network& net,
                                                 std::span<const double> features) {
  if (features.size() != net.input_dim)
    throw Error("feature dimension mismatch: network expects " +
                std::to_string(net.input_dim) + ", got " +
                std::to_string(features.size()));
  for (double v : features)
    if (!std::isfinite(v)) throw Error("non-finite feature value");

  std::vector<double> hidden(net.hidden_dim);
  for (std::uint32_t h = 0; h < net.hidden_dim; ++h) {
    double z = net.b1[h];
    const double* row = net.w1.data() + std::size_t{h} * net.input_dim;
    for (std::uint32_t i = 0; i < net.input_dim; ++i) {
      const double x_hat = (features[i] - net.norm.mean[i]) / net.norm.stddev[i];
      z += row[i] * x_hat;
    }
    hidden[h] = std::tanh(z);
  }
  std::vector<double> logits(net.output_dim);
  for (std::uint32_t o = 0; o < net.output_dim; ++o) {
    double z = net.b2[o];
    const double* row = net.w2.data() + std::size_t{o} * net.hidden_dim;
    for (std::uint32_t h = 0; h < net.hidden_dim; ++h) z += row[h] * hidden[h];
    logits[o] = z;
  }
  softmax_inplace(logits);
  return logits;
}

struct Prediction {
  std::vector<double> probabilities;
  Gesture gesture = Gesture::Rest;
  double confidence = 0.0;
};

// Five-class gesture prediction; argmax ties break toward the lower ordinal.
inline Prediction predict(const Network& net, std::span<const double> features) {
  if (net.output_dim != kGestureCount)
    throw Error("gesture prediction needs a " + std::to_string(kGestureCount) +
                "-class network");
  Prediction prediction;
  prediction.probabilities = forward_probabilities(net, features);
  std::size_t best = 0;
  for (std::size_t i = 1; i < prediction.probabilities.size(); ++i)
    if (prediction.probabilities[i] > prediction.probabilities[best]) best = i;
  prediction.gesture = gesture_from_ordinal(static_cast<int>(best));
  prediction.confidence = prediction.probabilities[best];
  return prediction;
}

}  // namespace emg
