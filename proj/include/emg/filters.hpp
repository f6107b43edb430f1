#pragma once

// Preprocessing stages: mains notch filter and ADC quantization.

#include <cmath>
#include <complex>
#include <numbers>

#include "emg/types.hpp"

namespace emg {

// Second-order IIR notch (biquad, constrained-zero design). The zeros sit
// exactly on the unit circle at the notch frequency, so the tone itself is
// nulled; Q sets how narrow the rejection band is.
struct NotchCoefficients {
  double b0, b1, b2;  // numerator (normalized by a0)
  double a1, a2;      // denominator
};

inline NotchCoefficients notch_coefficients(double notch_hz, double sample_rate_hz,
                                            double quality) {
  const double w0 = 2.0 * std::numbers::pi * notch_hz / sample_rate_hz;
  const double alpha = std::sin(w0) / (2.0 * quality);
  const double c = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return NotchCoefficients{1.0 / a0, -2.0 * c / a0, 1.0 / a0, -2.0 * c / a0,
                           (1.0 - alpha) / a0};
}

// Gain magnitude of the notch at an arbitrary frequency. Useful for
// verifying rejection depth and passband flatness.
inline double notch_gain(const NotchCoefficients& k, double freq_hz,
                         double sample_rate_hz) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const std::complex<double> num = k.b0 + k.b1 * z1 + k.b2 * z2;
  const std::complex<double> den = 1.0 + k.a1 * z1 + k.a2 * z2;
  return std::abs(num / den);
}

inline Recording notch_filter(const Recording& rec, double notch_hz,
                              double quality = 10.0) {
  validate(rec);
  if (!(quality > 0.0)) throw Error("notch quality factor must be positive");
  const double nyquist = rec.sample_rate_hz / 2.0;
  if (!(notch_hz > 0.0) || notch_hz >= nyquist)
    throw Error("notch frequency must lie in (0, Nyquist): got " +
                std::to_string(notch_hz) + " Hz at " +
                std::to_string(rec.sample_rate_hz) + " Hz sampling");

  const NotchCoefficients k =
      notch_coefficients(notch_hz, rec.sample_rate_hz, quality);
  Recording out;
  out.sample_rate_hz = rec.sample_rate_hz;
  out.channels.reserve(rec.channel_count());
  for (const auto& channel : rec.channels) {
    std::vector<double> filtered(channel.size());
    // Direct form II transposed, zero initial state per channel.
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
      const double x = channel[i];
      const double y = k.b0 * x + s1;
      s1 = k.b1 * x - k.a1 * y + s2;
      s2 = k.b2 * x - k.a2 * y;
      filtered[i] = y;
    }
    out.channels.push_back(std::move(filtered));
  }
  return out;
}

// Mid-rise uniform quantizer: 2^bits levels spanning ±full_scale, each
// sample snapped to the nearest level and returned in volts. Out-of-range
// samples clamp to the end levels. Exactly idempotent.
inline double quantize_sample(double v, const AdcConfig& cfg) {
  const double step =
      2.0 * cfg.full_scale_volts / static_cast<double>(1LL << cfg.resolution_bits);
  const double half_levels = static_cast<double>(1LL << (cfg.resolution_bits - 1));
  double idx = std::floor(v / step);
  if (idx < -half_levels) idx = -half_levels;
  if (idx > half_levels - 1.0) idx = half_levels - 1.0;
  return (idx + 0.5) * step;
}

inline Recording quantize(const Recording& rec, const AdcConfig& cfg) {
  validate(rec);
  validate(cfg);
  Recording out;
  out.sample_rate_hz = rec.sample_rate_hz;
  out.channels.reserve(rec.channel_count());
  for (const auto& channel : rec.channels) {
    std::vector<double> q(channel.size());
    for (std::size_t i = 0; i < channel.size(); ++i)
      q[i] = quantize_sample(channel[i], cfg);
    out.channels.push_back(std::move(q));
  }
  return out;
}

}  // namespace emg
