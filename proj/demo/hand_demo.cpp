// Drives the simulated hand with a scripted gesture sequence and rising
// fingertip forces, printing the state after each tick.

#include <cstdio>

#include "emg/controller.hpp"

int main() {
  using namespace emg;

  const HandConfig cfg;
  const FsrModel fsr;
  HandState state;

  const struct {
    Gesture gesture;
    int ticks;
  } script[] = {
      {Gesture::Grasp, 6},      // start closing
      {Gesture::Grasp, 2},      // same gesture: stop mid-travel
      {Gesture::Grasp, 8},      // and again: resume until the limit
      {Gesture::RotateCw, 4},   // wrist clockwise
      {Gesture::RotateCcw, 3},  // preempt with the other direction
      {Gesture::Rest, 2},       // rest is ignored
  };

  const double dt = 0.064;  // one 128-sample window at 2000 Hz
  double force = 0.0;
  for (const auto& phase : script) {
    state = step(state, GestureEvent{phase.gesture, 0.0}, dt, cfg);
    std::array<double, 5> forces{force, force, force, force, force};
    state.vibration_v = feedback(fsr, forces);
    std::printf("%-10s -> %-12s thumb %6.1f finger %6.1f wrist %6.1f vib %.2f V\n",
                std::string(to_string(phase.gesture)).c_str(),
                std::string(to_string(state.movement)).c_str(), state.thumb_deg,
                state.finger_deg, state.wrist_deg, state.vibration_v[0]);
    for (int i = 1; i < phase.ticks; ++i) {
      state = step(state, std::nullopt, dt, cfg);
      force += 0.8;
    }
  }
  return 0;
}
