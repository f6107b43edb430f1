#pragma once

// Core domain types shared across the EMG gesture pipeline.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emg {

// Single error type for the whole library. Messages are meant to be
// actionable on their own (they carry positions, names, dimensions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The five gesture classes. Ordinals are fixed: they index the network
// output layer, confusion matrices, and the model file class table.
enum class Gesture : int {
  Rest = 0,
  Open = 1,
  Grasp = 2,
  RotateCw = 3,
  RotateCcw = 4,
};

inline constexpr int kGestureCount = 5;

inline constexpr std::array<Gesture, kGestureCount> kAllGestures = {
    Gesture::Rest, Gesture::Open, Gesture::Grasp, Gesture::RotateCw,
    Gesture::RotateCcw};

constexpr std::string_view to_string(Gesture g) {
  switch (g) {
    case Gesture::Rest: return "rest";
    case Gesture::Open: return "open";
    case Gesture::Grasp: return "grasp";
    case Gesture::RotateCw: return "rotate_cw";
    case Gesture::RotateCcw: return "rotate_ccw";
  }
  return "?";
}

inline std::optional<Gesture> gesture_from_string(std::string_view name) {
  for (Gesture g : kAllGestures) {
    if (name == to_string(g)) return g;
  }
  return std::nullopt;
}

inline int ordinal(Gesture g) { return static_cast<int>(g); }

inline Gesture gesture_from_ordinal(int i) {
  if (i < 0 || i >= kGestureCount)
    throw Error("gesture ordinal out of range: " + std::to_string(i));
  return static_cast<Gesture>(i);
}

inline std::vector<std::string> gesture_names() {
  std::vector<std::string> names;
  names.reserve(kGestureCount);
  for (Gesture g : kAllGestures) names.emplace_back(to_string(g));
  return names;
}

// Multi-channel sampled EMG signal, one vector per channel, in volts.
struct Recording {
  std::vector<std::vector<double>> channels;
  double sample_rate_hz = 2000.0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t sample_count() const {
    return channels.empty() ? 0 : channels.front().size();
  }
};

inline void validate(const Recording& rec) {
  if (rec.sample_rate_hz <= 0.0)
    throw Error("recording sample rate must be positive");
  if (rec.channels.empty()) throw Error("recording has zero channels");
  const std::size_t n = rec.channels.front().size();
  for (std::size_t c = 1; c < rec.channels.size(); ++c) {
    if (rec.channels[c].size() != n)
      throw Error("recording channels have unequal lengths (channel " +
                  std::to_string(c + 1) + " has " +
                  std::to_string(rec.channels[c].size()) + ", expected " +
                  std::to_string(n) + ")");
  }
}

// One fixed-length slice of a recording, channel-major, optionally labeled.
struct Window {
  std::vector<std::vector<double>> samples;
  std::optional<Gesture> label;

  std::size_t channel_count() const { return samples.size(); }
  std::size_t length() const {
    return samples.empty() ? 0 : samples.front().size();
  }
};

struct AdcConfig {
  double sample_rate_hz = 2000.0;
  int resolution_bits = 10;
  double full_scale_volts = 2.5;
};

inline void validate(const AdcConfig& cfg) {
  // 1000 Hz keeps the 500 Hz top of the EMG band below Nyquist.
  if (cfg.sample_rate_hz < 1000.0)
    throw Error("ADC sample rate must be at least 1000 Hz");
  if (cfg.resolution_bits < 1 || cfg.resolution_bits > 30)
    throw Error("ADC resolution must be between 1 and 30 bits");
  if (!(cfg.full_scale_volts > 0.0))
    throw Error("ADC full scale must be positive");
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace emg
