#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

#include "emg/features_fd.hpp"
#include "emg/fft.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace emg;
using testutil::Rng;

namespace {

double max_abs(std::span<const std::complex<double>> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Largest elementwise deviation relative to the oracle's largest bin.
double relative_error(std::span<const std::complex<double>> got,
                      std::span<const std::complex<double>> want) {
  const double scale = std::max(max_abs(want), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
  return worst;
}

std::vector<double> tone(std::size_t n, double cycles_per_window,
                         double amplitude = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * cycles_per_window *
                                    static_cast<double>(i) /
                                    static_cast<double>(n) +
                                phase);
  return x;
}

}  // namespace

TEST_CASE("fft of an impulse is flat") {
  std::vector<double> x(128, 0.0);
  x[0] = 1.0;
  const auto spectrum = fft(std::span<const double>(x));
  for (const auto& bin : spectrum) {
    CHECK(std::abs(bin - std::complex<double>{1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("fft of a constant concentrates in bin zero") {
  const double c = -0.75;
  std::vector<double> x(128, c);
  const auto spectrum = fft(std::span<const double>(x));
  CHECK(std::abs(spectrum[0] - std::complex<double>{128.0 * c, 0.0}) < 1e-9);
  for (std::size_t k = 1; k < spectrum.size(); ++k)
    CHECK(std::abs(spectrum[k]) < 1e-9 * 128.0 * std::abs(c));
}

TEST_CASE("fft matches the naive DFT on random inputs of all sizes") {
  Rng rng{21};
  for (std::size_t n = 2; n <= 1024; n *= 2) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto x = testutil::random_samples(rng, n);
      const auto got = fft(std::span<const double>(x));
      const auto want = oracle::naive_dft(std::span<const double>(x));
      CHECK(relative_error(got, want) < 1e-9);
    }
  }
}

TEST_CASE("fft rejects unsupported lengths") {
  CHECK_THROWS_AS(fft(std::span<const double>(std::vector<double>(100))), Error);
  CHECK_THROWS_AS(fft(std::span<const double>(std::vector<double>(1))), Error);
  CHECK_THROWS_AS(FftPlan(0), Error);
}

TEST_CASE("fft linearity") {
  Rng rng{22};
  const std::size_t n = 256;
  const auto x = testutil::random_samples(rng, n);
  const auto y = testutil::random_samples(rng, n);
  const double a = rng.uniform(-3.0, 3.0);
  const double b = rng.uniform(-3.0, 3.0);
  std::vector<double> combined(n);
  for (std::size_t i = 0; i < n; ++i) combined[i] = a * x[i] + b * y[i];

  const auto fx = fft(std::span<const double>(x));
  const auto fy = fft(std::span<const double>(y));
  const auto fc = fft(std::span<const double>(combined));
  std::vector<std::complex<double>> expected(n);
  for (std::size_t i = 0; i < n; ++i) expected[i] = a * fx[i] + b * fy[i];
  CHECK(relative_error(fc, expected) < 1e-9);
}

TEST_CASE("Parseval's identity per window") {
  Rng rng{23};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = std::size_t{8} << (rng.next() % 6);
    const auto x = testutil::random_samples(rng, n);
    double time_energy = 0.0;
    for (double v : x) time_energy += v * v;
    const auto spectrum = fft(std::span<const double>(x));
    double freq_energy = 0.0;
    for (const auto& bin : spectrum) freq_energy += std::norm(bin);
    freq_energy /= static_cast<double>(n);
    CHECK(testutil::rel_close(time_energy, freq_energy, 1e-9));
  }
}

TEST_CASE("power spectrum of a bin-centered tone") {
  const std::size_t n = 128;
  const double amplitude = 2.0;
  const std::size_t bin = 10;
  const auto x = tone(n, static_cast<double>(bin), amplitude);
  const Spectrum s = power_spectrum(x, 2000.0, 1);
  REQUIRE(s.bins.size() == 64);
  CHECK(s.bin_width_hz == Catch::Approx(15.625));
  CHECK(s.channel_index == 1);
  // |X_bin| = A*N/2, so one-sided power is A^2 * N / 4.
  const double expected_peak = amplitude * amplitude * n / 4.0;
  CHECK(s.bins[bin] == Catch::Approx(expected_peak).epsilon(1e-9));
  for (std::size_t k = 0; k < s.bins.size(); ++k)
    if (k != bin) CHECK(s.bins[k] <= 1e-9 * expected_peak);

  const std::vector<double> zeros(n, 0.0);
  for (double p : power_spectrum(zeros).bins) CHECK(p == 0.0);
}

TEST_CASE("select_bins finds constructed tones") {
  // Per channel, eight bin-centered tones with distinct amplitudes.
  const std::vector<std::uint32_t> expected{3, 9, 17, 22, 30, 41, 50, 60};
  Window w;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> x(128, 0.0);
    for (std::size_t j = 0; j < expected.size(); ++j) {
      const auto t = tone(128, expected[j], 1.0 + 0.1 * j + 0.05 * c);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[i];
    }
    w.samples.push_back(std::move(x));
  }
  const std::vector<Window> training{w, w, w};
  const BinSelection sel = select_bins(training);
  REQUIRE(sel.channel_count() == 3);
  for (int c = 0; c < 3; ++c) CHECK(sel.channels[c] == expected);
}

TEST_CASE("select_bins tie-break and degenerate cases") {
  // An impulse has a perfectly flat power spectrum, so ties resolve to
  // the lowest indices.
  Window impulse;
  impulse.samples.assign(2, std::vector<double>(128, 0.0));
  impulse.samples[0][0] = 1.0;
  impulse.samples[1][0] = 1.0;
  const BinSelection sel = select_bins(std::vector<Window>{impulse});
  const std::vector<std::uint32_t> expected{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(sel.channels[0] == expected);
  CHECK(sel.channels[1] == expected);

  CHECK_THROWS_AS(select_bins(std::vector<Window>{}), Error);
}

TEST_CASE("select_bins on one window equals that window's own top bins") {
  Rng rng{31};
  const Window w = testutil::random_window(rng, 3, 128);
  const BinSelection sel = select_bins(std::vector<Window>{w});
  for (int c = 0; c < 3; ++c) {
    const Spectrum s = power_spectrum(w.samples[c]);
    std::vector<std::uint32_t> order(s.bins.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (s.bins[a] != s.bins[b]) return s.bins[a] > s.bins[b];
      return a < b;
    });
    order.resize(kBinsPerChannel);
    std::sort(order.begin(), order.end());
    CHECK(sel.channels[c] == order);
  }
}

TEST_CASE("select_bins is invariant to training-window order") {
  Rng rng{32};
  std::vector<Window> windows;
  for (int i = 0; i < 12; ++i)
    windows.push_back(testutil::random_window(rng, 3, 128));
  const BinSelection forward = select_bins(windows);
  std::reverse(windows.begin(), windows.end());
  std::swap(windows[2], windows[7]);
  const BinSelection shuffled = select_bins(windows);
  CHECK(forward.channels == shuffled.channels);
}

TEST_CASE("extract_fd picks the selected powers") {
  Rng rng{33};
  Window zero;
  zero.samples.assign(3, std::vector<double>(128, 0.0));
  BinSelection sel;
  sel.channels.assign(3, {0, 1, 2, 3, 4, 5, 6, 7});
  const auto zeros = extract_fd(zero, sel);
  REQUIRE(zeros.size() == 24);
  for (double v : zeros) CHECK(v == 0.0);

  // A training tone shows up as a single dominant entry in its slot.
  sel.channels.assign(3, {2, 9, 17, 25, 33, 41, 49, 57});
  Window toneWindow;
  toneWindow.samples.assign(3, std::vector<double>(128, 0.0));
  toneWindow.samples[1] = tone(128, 17.0, 1.5);
  const auto features = extract_fd(toneWindow, sel);
  const std::size_t slot = 8 + 2;  // channel 1, third selected bin
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i == slot)
      CHECK(features[i] > 1.0);
    else
      CHECK(features[i] <= 1e-9 * features[slot]);
  }

  // Random window matches the spectrum-then-pick composition via the
  // naive DFT oracle.
  const Window w = testutil::random_window(rng, 3, 128);
  const auto got = extract_fd(w, sel);
  std::size_t k = 0;
  for (int c = 0; c < 3; ++c) {
    const auto dft = oracle::naive_dft(std::span<const double>(w.samples[c]));
    for (std::uint32_t idx : sel.channels[c]) {
      const double want = std::norm(dft[idx]) / 128.0;
      CHECK(testutil::rel_close(got[k++], want, 1e-9));
    }
  }
}

TEST_CASE("extract_fd is unaffected by tones at non-selected bins") {
  BinSelection sel;
  sel.channels.assign(1, {4, 11, 19, 26, 34, 43, 52, 61});
  Rng rng{34};
  Window w = testutil::random_window(rng, 1, 128);
  const auto base = extract_fd(w, sel);
  // Add a strong bin-centered tone away from every selected bin.
  const auto extra = tone(128, 30.0, 5.0);
  for (std::size_t i = 0; i < 128; ++i) w.samples[0][i] += extra[i];
  const auto bumped = extract_fd(w, sel);
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(testutil::rel_close(bumped[i], base[i], 1e-9, 1e-12));
}

TEST_CASE("extract_fd rejects corrupt selections") {
  Rng rng{35};
  const Window w = testutil::random_window(rng, 2, 128);
  BinSelection sel;
  sel.channels.assign(2, {0, 1, 2, 3, 4, 5, 6, 70});  // 70 >= 64
  CHECK_THROWS_AS(extract_fd(w, sel), Error);
  sel.channels.assign(1, {0, 1, 2, 3, 4, 5, 6, 7});  // channel count mismatch
  CHECK_THROWS_AS(extract_fd(w, sel), Error);
}
