#pragma once

// Head-to-head benchmark of the time-domain and frequency-domain feature
// paths: per-window extraction time (median of trials on identical window
// sequences), training metrics, and empirical complexity slopes from a
// log-log fit over window sizes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "emg/features_fd.hpp"
#include "emg/features_td.hpp"
#include "emg/pipeline.hpp"
#include "emg/synth.hpp"
#include "emg/types.hpp"
#include "emg/windowing.hpp"

namespace emg {

struct LabeledRecording {
  Recording recording;
  Gesture label = Gesture::Rest;
};

struct PathBench {
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double extraction_ms_per_window = 0.0;
  int training_epochs = 0;
  double training_time_s = 0.0;
};

struct ComplexitySlopes {
  std::vector<std::size_t> window_sizes;
  std::vector<double> td_ms_per_window;
  std::vector<double> fd_ms_per_window;
  double td_slope = 0.0;
  double fd_slope = 0.0;
};

struct BenchReport {
  PathBench td;
  PathBench fd;
  std::optional<ComplexitySlopes> slopes;
  std::string machine;
  std::size_t window_count = 0;
  int trials = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline volatile double timing_sink = 0.0;

// Median-of-trials per-window time in milliseconds for `body(window)`,
// repeated `repeats` times per trial. Runs on the calling thread only so
// the two paths stay comparable.
template <typename Body>
double time_per_window_ms(std::span<const Window> windows, int trials,
                          std::size_t repeats, Body&& body) {
  std::vector<double> per_trial;
  per_trial.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < repeats; ++r)
      for (const Window& window : windows) body(window);
    const auto t1 = std::chrono::steady_clock::now();
    const double total_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    per_trial.push_back(total_ms /
                        (static_cast<double>(repeats) * windows.size()));
  }
  return median(std::move(per_trial));
}

inline std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    const auto pos = line.find("model name");
    if (pos != std::string::npos) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        cpu = line.substr(colon + 1);
        while (!cpu.empty() && cpu.front() == ' ') cpu.erase(cpu.begin());
      }
      break;
    }
  }
  return cpu + ", " + std::to_string(std::thread::hardware_concurrency()) +
         " hw threads, compiler " + __VERSION__;
}

// Least-squares slope of ln(y) against ln(x).
inline double loglog_slope(std::span<const std::size_t> x,
                           std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(static_cast<double>(x[i]));
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

inline std::vector<Window> windows_from(std::span<const LabeledRecording> recordings,
                                        std::size_t window_len, std::size_t stride) {
  std::vector<Window> windows;
  for (const LabeledRecording& lr : recordings) {
    auto w = window_stream(lr.recording, window_len, stride, lr.label);
    windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }
  return windows;
}

inline BenchReport benchmark(std::span<const LabeledRecording> recordings,
                             int trials, std::size_t window_len = 128,
                             std::size_t stride = 128,
                             const TrainConfig& train_cfg = {}) {
  if (trials < 3) throw Error("benchmark needs at least 3 trials, got " +
                              std::to_string(trials));
  if (recordings.empty()) throw Error("benchmark needs at least one recording");
  const std::vector<Window> windows = windows_from(recordings, window_len, stride);
  if (windows.empty())
    throw Error("insufficient data for one full window of " +
                std::to_string(window_len) + " samples");

  BenchReport report;
  report.trials = trials;
  report.window_count = windows.size();
  report.machine = detail::machine_descriptor();

  const std::size_t channel_count = windows.front().channel_count();
  const std::size_t repeats = std::max<std::size_t>(1, 2048 / windows.size());

  // Identical window sequence for both paths.
  {
    std::vector<double> out(channel_count * kTdFeaturesPerChannel);
    double acc = 0.0;
    report.td.extraction_ms_per_window = detail::time_per_window_ms(
        windows, trials, repeats, [&](const Window& w) {
          extract_td_into(w, out);
          acc += out[0];
        });
    detail::timing_sink = acc;
  }
  {
    const BinSelection sel = select_bins(windows);
    FftPlan plan(window_len);
    std::vector<std::complex<double>> work(window_len);
    std::vector<double> bins(window_len / 2);
    std::vector<double> out(channel_count * kBinsPerChannel);
    double acc = 0.0;
    report.fd.extraction_ms_per_window = detail::time_per_window_ms(
        windows, trials, repeats, [&](const Window& w) {
          extract_fd_into(w, sel, plan, work, bins, out);
          acc += out[0];
        });
    detail::timing_sink = acc;
  }

  auto fill = [](PathBench& path, const TrainReport& r) {
    path.test_accuracy = r.test_accuracy;
    path.train_accuracy = r.train_accuracy;
    path.validation_accuracy = r.validation_accuracy;
    path.training_epochs = r.epochs_run;
    path.training_time_s = r.wall_time_s;
  };
  fill(report.td,
       train_pipeline(windows, FeaturePath::TimeDomain, train_cfg).report);
  fill(report.fd,
       train_pipeline(windows, FeaturePath::FrequencyDomain, train_cfg).report);
  return report;
}

// Empirical complexity of the two extraction paths: per-window time across
// window sizes, fitted as a power law. Linear TD extraction should sit
// near slope 1; the FFT-based path above it.
inline ComplexitySlopes measure_complexity_slopes(
    std::vector<std::size_t> sizes = {128, 256, 512, 1024, 2048, 4096},
    int trials = 5, std::uint64_t seed = 1) {
  if (sizes.size() < 2) throw Error("slope fit needs at least two window sizes");
  const std::size_t max_size = *std::max_element(sizes.begin(), sizes.end());
  const std::size_t total_samples = max_size * 32;

  AdcConfig cfg;
  const SynthProfile& profile = default_profiles()[ordinal(Gesture::Grasp)];
  const Recording rec =
      synthesize_emg(Gesture::Grasp,
                     static_cast<double>(total_samples) / cfg.sample_rate_hz,
                     cfg, seed, profile);

  ComplexitySlopes slopes;
  slopes.window_sizes = sizes;
  for (std::size_t size : sizes) {
    const std::vector<Window> windows = window_stream(rec, size, size);
    const std::size_t repeats = std::max<std::size_t>(1, 8192 / windows.size());
    const std::size_t channel_count = windows.front().channel_count();

    std::vector<double> td_out(channel_count * kTdFeaturesPerChannel);
    double acc = 0.0;
    slopes.td_ms_per_window.push_back(detail::time_per_window_ms(
        windows, trials, repeats, [&](const Window& w) {
          extract_td_into(w, td_out);
          acc += td_out[0];
        }));

    const BinSelection sel = select_bins(std::span(windows).first(1));
    FftPlan plan(size);
    std::vector<std::complex<double>> work(size);
    std::vector<double> bins(size / 2);
    std::vector<double> fd_out(channel_count * kBinsPerChannel);
    slopes.fd_ms_per_window.push_back(detail::time_per_window_ms(
        windows, trials, repeats, [&](const Window& w) {
          extract_fd_into(w, sel, plan, work, bins, fd_out);
          acc += fd_out[0];
        }));
    detail::timing_sink = acc;
  }
  slopes.td_slope = detail::loglog_slope(slopes.window_sizes, slopes.td_ms_per_window);
  slopes.fd_slope = detail::loglog_slope(slopes.window_sizes, slopes.fd_ms_per_window);
  return slopes;
}

// Text table with one row per compared parameter.
inline std::string render_table(const BenchReport& report) {
  char buf[160];
  std::string out;
  auto row = [&](const char* name, const std::string& fd, const std::string& td) {
    std::snprintf(buf, sizeof(buf), "%-38s %-18s %s\n", name, fd.c_str(),
                  td.c_str());
    out += buf;
  };
  auto num = [&](double v, const char* fmt = "%.4g") {
    std::snprintf(buf, sizeof(buf), fmt, v);
    return std::string(buf);
  };
  row("Parameter", "Frequency Domain", "Time Domain");
  row("Accuracy (test split)", num(report.fd.test_accuracy),
      num(report.td.test_accuracy));
  if (report.slopes)
    row("Measured Complexity Slope", num(report.slopes->fd_slope, "%.3f"),
        num(report.slopes->td_slope, "%.3f"));
  row("Feature Extraction Time/Window (ms)",
      num(report.fd.extraction_ms_per_window),
      num(report.td.extraction_ms_per_window));
  row("Training Epochs", std::to_string(report.fd.training_epochs),
      std::to_string(report.td.training_epochs));
  row("Training Time (Seconds)", num(report.fd.training_time_s),
      num(report.td.training_time_s));
  out += "machine: " + report.machine + "\n";
  return out;
}

}  // namespace emg
