#pragma once

// Independent reference implementations. These are deliberately written
// from the defining formulas with different building blocks than the
// library (std::accumulate, std::pow, std::polar) and must stay decoupled
// from the implementation paths they check.

#include <complex>
#include <numeric>
#include <span>
#include <vector>

namespace oracle {

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
  const double mu = mean(x);
  double sum = 0.0;
  for (double v : x) sum += std::pow(v - mu, 2.0);
  return sum / static_cast<double>(x.size() - 1);
}

inline double std_dev(std::span<const double> x) {
  return std::sqrt(variance(x));
}

inline double kurtosis(std::span<const double> x) {
  const double mu = mean(x);
  double fourth = 0.0;
  for (double v : x) fourth += std::pow(v - mu, 4.0);
  fourth /= static_cast<double>(x.size());
  return fourth / std::pow(std_dev(x), 4.0);
}

inline double waveform_length(std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < x.size(); ++n)
    sum += std::abs(x[n + 1] - x[n]);
  return sum;
}

inline double mad(std::span<const double> x) {
  const double mu = mean(x);
  double sum = 0.0;
  for (double v : x) sum += std::abs(v - mu);
  return sum / static_cast<double>(x.size());
}

// Naive O(N^2) DFT, X_k = sum_n x_n e^{-2 pi i k n / N}.
inline std::vector<std::complex<double>> naive_dft(
    std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * 3.14159265358979323846 *
                           static_cast<double>(k) * static_cast<double>(j) /
                           static_cast<double>(n);
      sum += x[j] * std::polar(1.0, angle);
    }
    out[k] = sum;
  }
  return out;
}

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
  std::vector<std::complex<double>> cx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cx[i] = x[i];
  return naive_dft(std::span<const std::complex<double>>(cx));
}

}  // namespace oracle
