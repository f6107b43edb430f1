#pragma once

// Iterative radix-2 decimation-in-time FFT with precomputed twiddles and
// bit-reversal table. Forward convention X_k = sum_n x_n e^{-2 pi i k n / N}.

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "emg/types.hpp"

namespace emg {

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n) || n < 2)
      throw Error("FFT length must be a power of two >= 2, got " +
                  std::to_string(n));
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = std::polar(1.0, angle);
    }
    bit_reverse_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      bit_reverse_[i] = r;
    }
  }

  std::size_t size() const { return n_; }

  // In-place forward transform; data.size() must equal size().
  void transform(std::span<std::complex<double>> data) const {
    if (data.size() != n_)
      throw Error("FFT buffer size does not match plan size");
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = bit_reverse_[i];
      if (j > i) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t twiddle_step = n_ / len;
      for (std::size_t block = 0; block < n_; block += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const std::complex<double> w = twiddles_[k * twiddle_step];
          const std::complex<double> t = w * data[block + k + half];
          const std::complex<double> u = data[block + k];
          data[block + k] = u + t;
          data[block + k + half] = u - t;
        }
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

inline std::vector<std::complex<double>> fft(
    std::span<const std::complex<double>> samples) {
  FftPlan plan(samples.size());
  std::vector<std::complex<double>> data(samples.begin(), samples.end());
  plan.transform(data);
  return data;
}

inline std::vector<std::complex<double>> fft(std::span<const double> samples) {
  FftPlan plan(samples.size());
  std::vector<std::complex<double>> data(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) data[i] = samples[i];
  plan.transform(data);
  return data;
}

// One-sided power spectrum over the window: |X_k|^2 / N for
// k in [0, N/2). Bin width is sample_rate / N.
struct Spectrum {
  std::vector<double> bins;
  double bin_width_hz = 0.0;
  std::size_t channel_index = 0;
};

// Allocation-free variant: `work` must hold N complex values, `out_bins`
// N/2 doubles.
inline void power_spectrum_into(std::span<const double> samples,
                                const FftPlan& plan,
                                std::span<std::complex<double>> work,
                                std::span<double> out_bins) {
  const std::size_t n = plan.size();
  if (samples.size() != n) throw Error("power spectrum input does not match plan");
  if (work.size() != n || out_bins.size() != n / 2)
    throw Error("power spectrum buffers have wrong size");
  for (std::size_t i = 0; i < n; ++i) work[i] = samples[i];
  plan.transform(work);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k) out_bins[k] = std::norm(work[k]) * inv_n;
}

inline Spectrum power_spectrum(std::span<const double> samples,
                               double sample_rate_hz = 2000.0,
                               std::size_t channel_index = 0) {
  FftPlan plan(samples.size());
  Spectrum spectrum;
  spectrum.bins.resize(samples.size() / 2);
  spectrum.bin_width_hz = sample_rate_hz / static_cast<double>(samples.size());
  spectrum.channel_index = channel_index;
  std::vector<std::complex<double>> work(samples.size());
  power_spectrum_into(samples, plan, work, spectrum.bins);
  return spectrum;
}

}  // namespace emg
