#pragma once

// Frequency-domain features: per channel, the power at 8 bins chosen for
// highest mean power over a training window set. The selection is frozen
// into the model artifact so the feature semantics never drift at
// inference time.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emg/fft.hpp"
#include "emg/types.hpp"

namespace emg {

inline constexpr std::size_t kBinsPerChannel = 8;
inline constexpr std::string_view kFdFeatureOrder =
    "channel-major:selected-bins-ascending";

struct BinSelection {
  // Per channel: kBinsPerChannel unique bin indices, ascending.
  std::vector<std::vector<std::uint32_t>> channels;
  std::string source;

  std::size_t channel_count() const { return channels.size(); }
};

inline void validate(const BinSelection& sel, std::size_t bin_count) {
  if (sel.channels.empty()) throw Error("bin selection has no channels");
  for (std::size_t c = 0; c < sel.channels.size(); ++c) {
    const auto& idx = sel.channels[c];
    if (idx.size() != kBinsPerChannel)
      throw Error("bin selection channel " + std::to_string(c + 1) + " has " +
                  std::to_string(idx.size()) + " bins, expected " +
                  std::to_string(kBinsPerChannel));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= bin_count)
        throw Error("bin selection index " + std::to_string(idx[i]) +
                    " out of range [0, " + std::to_string(bin_count) + ")");
      if (i > 0 && idx[i] <= idx[i - 1])
        throw Error("bin selection indices must be unique and ascending");
    }
  }
}

// Averages per-channel power spectra over the training windows and keeps
// the 8 highest-mean-power bins per channel, ties broken toward the lower
// index. Invariant to the order of the training windows.
inline BinSelection select_bins(std::span<const Window> training_windows,
                                std::string source = {}) {
  if (training_windows.empty())
    throw Error("bin selection needs at least one training window");
  const std::size_t channel_count = training_windows.front().channel_count();
  const std::size_t window_len = training_windows.front().length();
  if (!is_power_of_two(window_len) || window_len < 2 * kBinsPerChannel)
    throw Error("bin selection needs power-of-two windows of at least " +
                std::to_string(2 * kBinsPerChannel) + " samples");
  const std::size_t bin_count = window_len / 2;

  std::vector<std::vector<double>> mean_power(
      channel_count, std::vector<double>(bin_count, 0.0));
  FftPlan plan(window_len);
  std::vector<std::complex<double>> work(window_len);
  std::vector<double> bins(bin_count);
  for (const Window& window : training_windows) {
    if (window.channel_count() != channel_count || window.length() != window_len)
      throw Error("training windows disagree in shape");
    for (std::size_t c = 0; c < channel_count; ++c) {
      power_spectrum_into(window.samples[c], plan, work, bins);
      for (std::size_t k = 0; k < bin_count; ++k) mean_power[c][k] += bins[k];
    }
  }

  BinSelection sel;
  sel.source = source.empty()
                   ? "mean-power:" + std::to_string(training_windows.size()) +
                         "-windows"
                   : std::move(source);
  sel.channels.resize(channel_count);
  for (std::size_t c = 0; c < channel_count; ++c) {
    std::vector<std::uint32_t> order(bin_count);
    std::iota(order.begin(), order.end(), 0u);
    const auto& power = mean_power[c];
    std::sort(order.begin(), order.end(),
              [&power](std::uint32_t a, std::uint32_t b) {
                if (power[a] != power[b]) return power[a] > power[b];
                return a < b;
              });
    order.resize(kBinsPerChannel);
    std::sort(order.begin(), order.end());
    sel.channels[c] = std::move(order);
  }
  return sel;
}

// Allocation-free variant for benchmarking; buffers as in
// power_spectrum_into, `out` holds 8 * channel_count values.
inline void extract_fd_into(const Window& window, const BinSelection& sel,
                            const FftPlan& plan,
                            std::span<std::complex<double>> work,
                            std::span<double> bins, std::span<double> out) {
  if (sel.channel_count() != window.channel_count())
    throw Error("bin selection channel count (" +
                std::to_string(sel.channel_count()) +
                ") does not match window (" +
                std::to_string(window.channel_count()) + ")");
  validate(sel, window.length() / 2);
  if (out.size() != window.channel_count() * kBinsPerChannel)
    throw Error("output span has wrong size for frequency-domain features");
  std::size_t k = 0;
  for (std::size_t c = 0; c < window.channel_count(); ++c) {
    power_spectrum_into(window.samples[c], plan, work, bins);
    for (std::uint32_t idx : sel.channels[c]) out[k++] = bins[idx];
  }
}

inline std::vector<double> extract_fd(const Window& window,
                                      const BinSelection& sel) {
  if (window.length() < 2 || !is_power_of_two(window.length()))
    throw Error("frequency-domain features need a power-of-two window");
  FftPlan plan(window.length());
  std::vector<std::complex<double>> work(window.length());
  std::vector<double> bins(window.length() / 2);
  std::vector<double> out(window.channel_count() * kBinsPerChannel);
  extract_fd_into(window, sel, plan, work, bins, out);
  return out;
}

}  // namespace emg
