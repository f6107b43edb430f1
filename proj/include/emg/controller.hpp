#pragma once

// Simulated prosthetic hand. Two grip servos (thumb, four fingers) plus a
// wrist-rotation stage; gestures toggle movements: the gesture that
// started a movement stops it, a different movement gesture preempts it,
// and reaching a travel limit stops it. Rest never changes the movement.
// Tactile feedback maps fingertip forces through FSR voltage dividers onto
// three vibration-motor regions.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "emg/types.hpp"

namespace emg {

inline constexpr double kMaxVibrationVolts = 2.5;
inline constexpr double kMinServoDeg = 0.0;
inline constexpr double kMaxServoDeg = 180.0;
inline constexpr int kFingertipCount = 5;
inline constexpr int kVibrationRegionCount = 3;

enum class Movement : int {
  Idle = 0,
  Opening = 1,
  Grasping = 2,
  RotatingCw = 3,
  RotatingCcw = 4,
};

constexpr std::string_view to_string(Movement m) {
  switch (m) {
    case Movement::Idle: return "idle";
    case Movement::Opening: return "opening";
    case Movement::Grasping: return "grasping";
    case Movement::RotatingCw: return "rotating_cw";
    case Movement::RotatingCcw: return "rotating_ccw";
  }
  return "?";
}

// The movement a gesture initiates; Rest initiates none.
constexpr std::optional<Movement> movement_for(Gesture g) {
  switch (g) {
    case Gesture::Rest: return std::nullopt;
    case Gesture::Open: return Movement::Opening;
    case Gesture::Grasp: return Movement::Grasping;
    case Gesture::RotateCw: return Movement::RotatingCw;
    case Gesture::RotateCcw: return Movement::RotatingCcw;
  }
  return std::nullopt;
}

struct HandState {
  double thumb_deg = 90.0;
  double finger_deg = 90.0;
  double wrist_deg = 90.0;
  Movement movement = Movement::Idle;
  std::array<double, kVibrationRegionCount> vibration_v{0.0, 0.0, 0.0};
};

struct HandConfig {
  double grip_rate_deg_s = 180.0;
  double wrist_rate_deg_s = 180.0;
  double open_deg = 180.0;  // grip servo endpoint for an open hand
  double grasp_deg = 0.0;   // grip servo endpoint for a closed hand
};

struct GestureEvent {
  Gesture gesture = Gesture::Rest;
  double timestamp_s = 0.0;
};

namespace detail {

inline double move_toward(double value, double target, double max_step) {
  const double delta = target - value;
  if (std::abs(delta) <= max_step) return target;
  return value + (delta > 0.0 ? max_step : -max_step);
}

}  // namespace detail

inline void validate(const HandConfig& cfg) {
  if (!(cfg.grip_rate_deg_s > 0.0) || !(cfg.wrist_rate_deg_s > 0.0))
    throw Error("servo rates must be positive");
  for (double endpoint : {cfg.open_deg, cfg.grasp_deg})
    if (!(endpoint >= kMinServoDeg) || !(endpoint <= kMaxServoDeg))
      throw Error("grip endpoints must lie in [0, 180] degrees");
}

// Advances the hand by dt. Event handling happens before integration, so a
// stop gesture halts the hand exactly where it is; a movement that reaches
// its travel limit returns the hand to Idle.
inline HandState step(HandState state, const std::optional<GestureEvent>& event,
                      double dt, const HandConfig& cfg = {}) {
  if (!(dt > 0.0)) throw Error("step needs dt > 0");
  validate(cfg);

  if (event) {
    if (const auto movement = movement_for(event->gesture)) {
      state.movement =
          (state.movement == *movement) ? Movement::Idle : *movement;
    }
  }

  const double grip_step = cfg.grip_rate_deg_s * dt;
  const double wrist_step = cfg.wrist_rate_deg_s * dt;
  switch (state.movement) {
    case Movement::Idle:
      break;
    case Movement::Opening:
      state.thumb_deg = detail::move_toward(state.thumb_deg, cfg.open_deg, grip_step);
      state.finger_deg =
          detail::move_toward(state.finger_deg, cfg.open_deg, grip_step);
      if (state.thumb_deg == cfg.open_deg && state.finger_deg == cfg.open_deg)
        state.movement = Movement::Idle;
      break;
    case Movement::Grasping:
      state.thumb_deg =
          detail::move_toward(state.thumb_deg, cfg.grasp_deg, grip_step);
      state.finger_deg =
          detail::move_toward(state.finger_deg, cfg.grasp_deg, grip_step);
      if (state.thumb_deg == cfg.grasp_deg && state.finger_deg == cfg.grasp_deg)
        state.movement = Movement::Idle;
      break;
    case Movement::RotatingCw:
      state.wrist_deg =
          detail::move_toward(state.wrist_deg, kMaxServoDeg, wrist_step);
      if (state.wrist_deg == kMaxServoDeg) state.movement = Movement::Idle;
      break;
    case Movement::RotatingCcw:
      state.wrist_deg =
          detail::move_toward(state.wrist_deg, kMinServoDeg, wrist_step);
      if (state.wrist_deg == kMinServoDeg) state.movement = Movement::Idle;
      break;
  }
  return state;
}

// Force-sensing resistor model: R(F) = k / F, so resistance falls as force
// rises; F = 0 is an open circuit. Each fingertip sits in a voltage
// divider, and each of the three regions drives its vibration motor with
// the strongest member fingertip, linearly mapped onto [0, 2.5] V and
// saturating at the force threshold.
struct FsrModel {
  double k_ohm_newton = 1e5;
  double divider_ohm = 1e4;
  double supply_volts = 5.0;
  double saturation_newton = 10.0;
  // thumb | index+middle | ring+little
  std::array<int, kFingertipCount> fingertip_region{0, 1, 1, 2, 2};
};

inline void validate(const FsrModel& fsr) {
  if (!(fsr.k_ohm_newton > 0.0) || !(fsr.divider_ohm > 0.0) ||
      !(fsr.supply_volts > 0.0) || !(fsr.saturation_newton > 0.0))
    throw Error("FSR model parameters must be positive");
  for (int region : fsr.fingertip_region)
    if (region < 0 || region >= kVibrationRegionCount)
      throw Error("fingertip region out of range");
}

inline double fsr_resistance(const FsrModel& fsr, double force_newton) {
  if (!(force_newton > 0.0)) throw Error("FSR resistance defined for force > 0");
  return fsr.k_ohm_newton / force_newton;
}

// Divider output across the fixed resistor; 0 V at zero force.
inline double divider_voltage(const FsrModel& fsr, double force_newton) {
  if (force_newton < 0.0 || std::isnan(force_newton))
    throw Error("negative force");
  if (force_newton == 0.0) return 0.0;
  const double r = fsr_resistance(fsr, force_newton);
  return fsr.supply_volts * fsr.divider_ohm / (fsr.divider_ohm + r);
}

inline std::array<double, kVibrationRegionCount> feedback(
    const FsrModel& fsr, std::span<const double> forces) {
  validate(fsr);
  if (forces.size() != kFingertipCount)
    throw Error("feedback needs " + std::to_string(kFingertipCount) +
                " fingertip forces, got " + std::to_string(forces.size()));

  std::array<double, kVibrationRegionCount> region_volts{0.0, 0.0, 0.0};
  for (int f = 0; f < kFingertipCount; ++f) {
    const double v = divider_voltage(fsr, forces[f]);
    const int region = fsr.fingertip_region[f];
    region_volts[region] = std::max(region_volts[region], v);
  }
  const double saturation_v = divider_voltage(fsr, fsr.saturation_newton);
  for (double& v : region_volts) {
    const double scaled = kMaxVibrationVolts * (v / saturation_v);
    v = std::min(scaled, kMaxVibrationVolts);
  }
  return region_volts;
}

}  // namespace emg
