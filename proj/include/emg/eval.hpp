#pragma once

// Confusion matrix and accuracy scoring for the five-class task.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>

#include "emg/network.hpp"
#include "emg/train.hpp"
#include "emg/types.hpp"

namespace emg {

struct ConfusionMatrix {
  // counts[true][predicted]
  std::array<std::array<std::uint64_t, kGestureCount>, kGestureCount> counts{};

  void add(Gesture truth, Gesture predicted) {
    ++counts[ordinal(truth)][ordinal(predicted)];
  }
  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts)
      for (std::uint64_t v : row) sum += v;
    return sum;
  }
  std::uint64_t trace() const {
    std::uint64_t sum = 0;
    for (int i = 0; i < kGestureCount; ++i) sum += counts[i][i];
    return sum;
  }
  std::uint64_t row_sum(int true_class) const {
    std::uint64_t sum = 0;
    for (std::uint64_t v : counts[true_class]) sum += v;
    return sum;
  }
};

// Correct classifications over total classifications.
inline double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

inline ConfusionMatrix evaluate(const Network& net, const Dataset& dataset) {
  if (net.output_dim != kGestureCount)
    throw Error("evaluation needs a " + std::to_string(kGestureCount) +
                "-class network");
  if (dataset.size() == 0) throw Error("empty evaluation dataset");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Prediction p = predict(net, dataset.features[i]);
    cm.add(gesture_from_ordinal(dataset.labels[i]), p.gesture);
  }
  return cm;
}

// CSV export: header row of predicted-class names, one row per true class.
inline std::string to_csv(const ConfusionMatrix& cm) {
  std::ostringstream os;
  os << "true\\predicted";
  for (Gesture g : kAllGestures) os << ',' << to_string(g);
  os << '\n';
  for (int t = 0; t < kGestureCount; ++t) {
    os << to_string(gesture_from_ordinal(t));
    for (int p = 0; p < kGestureCount; ++p) os << ',' << cm.counts[t][p];
    os << '\n';
  }
  return os.str();
}

}  // namespace emg
