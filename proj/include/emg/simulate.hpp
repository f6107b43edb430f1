#pragma once

// End-to-end harness: classify a recording window by window and drive the
// simulated hand, sampling a scripted force timeline for tactile feedback.

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "emg/controller.hpp"
#include "emg/csv.hpp"
#include "emg/pipeline.hpp"
#include "emg/types.hpp"
#include "emg/windowing.hpp"

namespace emg {

struct ForcePoint {
  double time_s = 0.0;
  std::array<double, kFingertipCount> forces{};
};

// CSV rows `time_s,f1,f2,f3,f4,f5`, `#` comment lines allowed, times
// non-decreasing.
inline std::vector<ForcePoint> load_force_timeline(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open force timeline: " + path.string());
  std::vector<ForcePoint> timeline;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    ForcePoint point;
    std::size_t cell = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= view.size(); ++i) {
      if (i == view.size() || view[i] == ',') {
        const double v =
            detail::parse_cell(view.substr(begin, i - begin), line_no, cell + 1);
        if (cell == 0)
          point.time_s = v;
        else if (cell <= kFingertipCount)
          point.forces[cell - 1] = v;
        ++cell;
        begin = i + 1;
      }
    }
    if (cell != 1 + kFingertipCount)
      throw Error("force timeline row at line " + std::to_string(line_no) +
                  " has " + std::to_string(cell) + " cells, expected " +
                  std::to_string(1 + kFingertipCount));
    if (!timeline.empty() && point.time_s < timeline.back().time_s)
      throw Error("force timeline times must be non-decreasing (line " +
                  std::to_string(line_no) + ")");
    timeline.push_back(point);
  }
  return timeline;
}

// Zero-order hold: the most recent scripted point at or before t; zero
// forces before the first point.
inline std::array<double, kFingertipCount> forces_at(
    std::span<const ForcePoint> timeline, double t) {
  std::array<double, kFingertipCount> forces{};
  for (const ForcePoint& point : timeline) {
    if (point.time_s > t) break;
    forces = point.forces;
  }
  return forces;
}

struct TraceSample {
  double time_s = 0.0;
  Gesture classified = Gesture::Rest;
  double confidence = 0.0;
  HandState state;
};

struct SimConfig {
  std::size_t window_len = 128;
  std::size_t stride = 128;
  HandConfig hand;
};

// Deterministic trace, one sample per window tick. Tick time is the end of
// the window; the first tick integrates from t = 0.
inline std::vector<TraceSample> run_simulation(
    const Network& net, const Recording& recording, const FsrModel& fsr,
    std::span<const ForcePoint> timeline, const SimConfig& cfg = {}) {
  validate(fsr);
  const std::vector<Window> windows =
      window_stream(recording, cfg.window_len, cfg.stride);
  std::vector<TraceSample> trace;
  if (windows.empty()) return trace;
  trace.reserve(windows.size());

  HandState state;
  double previous_t = 0.0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const double t =
        static_cast<double>(i * cfg.stride + cfg.window_len) /
        recording.sample_rate_hz;
    const double dt = t - previous_t;
    previous_t = t;

    const std::vector<double> features = extract_features(windows[i], net);
    const Prediction prediction = predict(net, features);
    state = step(state, GestureEvent{prediction.gesture, t}, dt, cfg.hand);
    state.vibration_v = feedback(fsr, forces_at(timeline, t));

    trace.push_back({t, prediction.gesture, prediction.confidence, state});
  }
  return trace;
}

inline void write_trace_csv(const std::filesystem::path& path,
                            std::span<const TraceSample> trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write trace: " + path.string());
  os << "time_s,gesture,confidence,movement,thumb_deg,finger_deg,wrist_deg,"
        "vibration1_v,vibration2_v,vibration3_v\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    os << buf;
  };
  for (const TraceSample& sample : trace) {
    num(sample.time_s);
    os << ',' << to_string(sample.classified) << ',';
    num(sample.confidence);
    os << ',' << to_string(sample.state.movement) << ',';
    num(sample.state.thumb_deg);
    os << ',';
    num(sample.state.finger_deg);
    os << ',';
    num(sample.state.wrist_deg);
    for (double v : sample.state.vibration_v) {
      os << ',';
      num(v);
    }
    os << '\n';
  }
  if (!os) throw Error("write failed: " + path.string());
}

}  // namespace emg
