#pragma once

// Glue between windows, features, and the classifier: dataset assembly,
// the streaming inference loop, and the windows-to-trained-model pipeline.

#include <chrono>
#include <span>
#include <vector>

#include "emg/features_fd.hpp"
#include "emg/features_td.hpp"
#include "emg/model_io.hpp"
#include "emg/network.hpp"
#include "emg/train.hpp"
#include "emg/types.hpp"

namespace emg {

// Feature vector for one window along the network's own path.
inline std::vector<double> extract_features(const Window& window,
                                            const Network& net) {
  if (net.path == FeaturePath::TimeDomain) return extract_td(window);
  return extract_fd(window, *net.bin_selection);
}

inline Dataset make_dataset_td(std::span<const Window> windows) {
  Dataset data;
  for (const Window& window : windows) {
    if (!window.label) throw Error("unlabeled window in training data");
    data.add(extract_td(window), ordinal(*window.label));
  }
  return data;
}

inline Dataset make_dataset_fd(std::span<const Window> windows,
                               const BinSelection& sel) {
  Dataset data;
  for (const Window& window : windows) {
    if (!window.label) throw Error("unlabeled window in training data");
    data.add(extract_fd(window, sel), ordinal(*window.label));
  }
  return data;
}

struct StreamResult {
  std::vector<Prediction> predictions;
  std::vector<double> latency_s;  // per-window extract+classify time
};

// One prediction per window, in order, with per-window latency.
inline StreamResult classify_stream(const Network& net,
                                    std::span<const Window> windows) {
  validate(net);
  StreamResult result;
  result.predictions.reserve(windows.size());
  result.latency_s.reserve(windows.size());
  for (const Window& window : windows) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> features = extract_features(window, net);
    Prediction prediction = predict(net, features);
    const auto t1 = std::chrono::steady_clock::now();
    result.predictions.push_back(std::move(prediction));
    result.latency_s.push_back(
        std::chrono::duration<double>(t1 - t0).count());
  }
  return result;
}

struct PipelineResult {
  Network network;
  TrainReport report;
};

// Labeled windows -> features -> trained network. For the frequency path
// the bin selection is computed over the supplied window set and frozen
// into the model.
inline PipelineResult train_pipeline(std::span<const Window> windows,
                                     FeaturePath path, const TrainConfig& cfg) {
  if (windows.empty()) throw Error("no training windows");
  const auto channel_count = static_cast<std::uint32_t>(windows.front().channel_count());

  NetworkSpec spec;
  spec.path = path;
  spec.output_dim = kGestureCount;
  spec.class_names = gesture_names();

  Dataset data;
  if (path == FeaturePath::TimeDomain) {
    spec.input_dim = channel_count * kTdFeaturesPerChannel;
    spec.feature_order = std::string(kTdFeatureOrder);
    data = make_dataset_td(windows);
  } else {
    spec.bin_selection = select_bins(windows);
    spec.input_dim = channel_count * static_cast<std::uint32_t>(kBinsPerChannel);
    spec.feature_order = std::string(kFdFeatureOrder);
    data = make_dataset_fd(windows, *spec.bin_selection);
  }

  TrainResult trained = train(data, cfg, spec);
  return {std::move(trained.network), trained.report};
}

}  // namespace emg
