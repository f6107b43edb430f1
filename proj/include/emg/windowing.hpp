#pragma once

#include <string>
#include <vector>

#include "emg/types.hpp"

namespace emg {

// Number of complete windows a recording of `samples` yields.
inline std::size_t window_count(std::size_t samples, std::size_t window_len,
                                std::size_t stride) {
  if (samples < window_len) return 0;
  return (samples - window_len) / stride + 1;
}

// Slices a recording into fixed-length windows; the trailing partial window
// is discarded. A recording shorter than one window yields an empty
// sequence and, when `diagnostic` is given, an explanation.
inline std::vector<Window> window_stream(const Recording& rec,
                                         std::size_t window_len = 128,
                                         std::size_t stride = 128,
                                         std::optional<Gesture> label = std::nullopt,
                                         std::string* diagnostic = nullptr) {
  validate(rec);
  if (!is_power_of_two(window_len) || window_len < 2)
    throw Error("window length must be a power of two >= 2, got " +
                std::to_string(window_len));
  if (stride < 1) throw Error("window stride must be at least 1");

  const std::size_t n = rec.sample_count();
  if (n < window_len) {
    if (diagnostic)
      *diagnostic = "recording has " + std::to_string(n) +
                    " samples, shorter than one " + std::to_string(window_len) +
                    "-sample window";
    return {};
  }

  const std::size_t count = window_count(n, window_len, stride);
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    Window win;
    win.label = label;
    win.samples.reserve(rec.channel_count());
    const std::size_t begin = w * stride;
    for (const auto& channel : rec.channels)
      win.samples.emplace_back(channel.begin() + begin,
                               channel.begin() + begin + window_len);
    windows.push_back(std::move(win));
  }
  return windows;
}

}  // namespace emg
