#pragma once

// Time-domain window statistics. The default classifier vector uses
// {variance, mad, waveform_length} per channel; mean, std_dev and kurtosis
// are exposed for analysis but not part of it.

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "emg/types.hpp"

namespace emg {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw Error("mean of empty sample sequence");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw Error("variance needs at least 2 samples");
  const double mu = mean(x);
  double sum = 0.0;
  for (double v : x) {
    const double d = v - mu;
    sum += d * d;
  }
  return sum / static_cast<double>(x.size() - 1);
}

inline double std_dev(std::span<const double> x) {
  return std::sqrt(variance(x));
}

// Fourth moment uses 1/N while sigma^4 comes from the N-1 variance; the
// two denominators are deliberately different.
inline double kurtosis(std::span<const double> x) {
  if (x.size() < 2) throw Error("kurtosis needs at least 2 samples");
  const double mu = mean(x);
  double m4 = 0.0, m2 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / static_cast<double>(x.size() - 1);
  if (var <= 0.0) throw Error("kurtosis of a degenerate distribution (sigma = 0)");
  m4 /= static_cast<double>(x.size());
  return m4 / (var * var);
}

inline double waveform_length(std::span<const double> x) {
  if (x.size() < 2) throw Error("waveform length needs at least 2 samples");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    sum += std::abs(x[i + 1] - x[i]);
  return sum;
}

inline double mad(std::span<const double> x) {
  if (x.empty()) throw Error("mean absolute deviation of empty sample sequence");
  const double mu = mean(x);
  double sum = 0.0;
  for (double v : x) sum += std::abs(v - mu);
  return sum / static_cast<double>(x.size());
}

inline constexpr int kTdFeaturesPerChannel = 3;
inline constexpr std::string_view kTdFeatureOrder = "channel-major:var,mad,wl";

// Fills `out` with {variance, mad, waveform_length} per channel,
// channel-major. `out` must hold 3 * channel_count values. Allocation-free
// so per-window extraction can be timed cleanly.
inline void extract_td_into(const Window& window, std::span<double> out) {
  if (window.length() < 2)
    throw Error("time-domain features need a window of at least 2 samples");
  if (out.size() != window.channel_count() * kTdFeaturesPerChannel)
    throw Error("output span has wrong size for time-domain features");
  std::size_t k = 0;
  for (const auto& channel : window.samples) {
    const std::span<const double> x(channel);
    out[k++] = variance(x);
    out[k++] = mad(x);
    out[k++] = waveform_length(x);
  }
}

inline std::vector<double> extract_td(const Window& window) {
  std::vector<double> out(window.channel_count() * kTdFeaturesPerChannel);
  extract_td_into(window, out);
  return out;
}

}  // namespace emg
