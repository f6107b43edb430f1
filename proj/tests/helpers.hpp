#pragma once

// Shared generators and comparison helpers for the test suites.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "emg/synth.hpp"
#include "emg/types.hpp"

namespace testutil {

using Rng = emg::detail::SplitMix64;

inline bool rel_close(double a, double b, double tol, double abs_floor = 0.0) {
  const double diff = std::abs(a - b);
  return diff <= tol * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

inline std::vector<double> random_samples(Rng& rng, std::size_t n,
                                          double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline emg::Window random_window(Rng& rng, std::size_t channels, std::size_t len,
                                 double lo = -1.0, double hi = 1.0) {
  emg::Window w;
  for (std::size_t c = 0; c < channels; ++c)
    w.samples.push_back(random_samples(rng, len, lo, hi));
  return w;
}

inline double rms(const std::vector<double>& v) {
  double ss = 0.0;
  for (double x : v) ss += x * x;
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Standard normal via Box-Muller on the deterministic generator.
inline double normal(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Scratch directory unique to the calling test binary.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("emgpipe_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

}  // namespace testutil
