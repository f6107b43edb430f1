#pragma once

// Parameterized synthetic EMG generator. Each gesture class gets a profile
// of per-channel band-power weights and a slow amplitude envelope, so the
// classes are statistically separable in both feature domains while the
// raw waveform respects the physiological envelope: amplitude within
// ±5000 µV (before amplifier gain), spectral content within 6–500 Hz.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "emg/types.hpp"

namespace emg {

inline constexpr double kRawEnvelopeVolts = 0.005;  // ±5000 µV
inline constexpr double kEmgBandLowHz = 6.0;
inline constexpr double kEmgBandHighHz = 500.0;
// A synthesized signal must cover at least one default window.
inline constexpr std::size_t kMinSynthSamples = 128;

struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;
  double weight = 0.0;  // relative band power
};

struct ChannelSynth {
  double rms_volts = 0.0;  // requested channel RMS before gain
  std::vector<Band> bands;
};

struct SynthProfile {
  std::vector<ChannelSynth> channels;
  double envelope_rate_hz = 1.5;
  double envelope_depth = 0.3;       // in [0, 1)
  double amplifier_gain = 100.0;     // instrumentation-amplifier stage
  double component_spacing_hz = 12.0;  // one sinusoid per this many Hz of band
};

namespace detail {

// splitmix64: deterministic across platforms, which keeps synthesized
// fixtures and trained models reproducible from a seed alone.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 rng{seed ^ (a * 0xA24BAED4963EE407ull) ^ (b * 0x9FB21C651E98DF25ull)};
  return rng.next();
}

}  // namespace detail

inline void validate(const SynthProfile& profile, double sample_rate_hz) {
  if (profile.channels.empty())
    throw Error("synthesis profile needs at least one channel");
  if (!(profile.envelope_depth >= 0.0) || profile.envelope_depth >= 1.0)
    throw Error("envelope depth must lie in [0, 1)");
  if (!(profile.envelope_rate_hz >= 0.0))
    throw Error("envelope rate must be non-negative");
  if (!(profile.amplifier_gain > 0.0))
    throw Error("amplifier gain must be positive");
  if (!(profile.component_spacing_hz > 0.0))
    throw Error("component spacing must be positive");
  const double nyquist = sample_rate_hz / 2.0;
  for (const ChannelSynth& channel : profile.channels) {
    if (!(channel.rms_volts >= 0.0))
      throw Error("channel RMS must be non-negative");
    for (const Band& band : channel.bands) {
      if (!(band.weight >= 0.0)) throw Error("band weight must be non-negative");
      if (band.low_hz < kEmgBandLowHz || band.high_hz > kEmgBandHighHz ||
          band.low_hz >= band.high_hz)
        throw Error("band must satisfy 6 <= low < high <= 500 Hz");
      if (band.high_hz >= nyquist)
        throw Error("band exceeds Nyquist frequency");
    }
  }
}

// Deterministic function of (class, duration, config, seed, profile).
inline Recording synthesize_emg(Gesture gesture, double duration_s,
                                const AdcConfig& cfg, std::uint64_t seed,
                                const SynthProfile& profile) {
  validate(cfg);
  validate(profile, cfg.sample_rate_hz);
  if (!(duration_s > 0.0)) throw Error("duration must be positive");
  const auto sample_count =
      static_cast<std::size_t>(std::llround(duration_s * cfg.sample_rate_hz));
  if (sample_count < kMinSynthSamples)
    throw Error("duration yields " + std::to_string(sample_count) +
                " samples, fewer than one " + std::to_string(kMinSynthSamples) +
                "-sample window");

  Recording rec;
  rec.sample_rate_hz = cfg.sample_rate_hz;
  rec.channels.reserve(profile.channels.size());
  const double dt = 1.0 / cfg.sample_rate_hz;
  const double two_pi = 2.0 * std::numbers::pi;

  for (std::size_t c = 0; c < profile.channels.size(); ++c) {
    const ChannelSynth& channel = profile.channels[c];
    detail::SplitMix64 rng{
        detail::mix_seed(seed, static_cast<std::uint64_t>(ordinal(gesture)), c)};

    double total_weight = 0.0;
    for (const Band& band : channel.bands) total_weight += band.weight;

    struct Component {
      double amp, omega, phase;
    };
    std::vector<Component> components;
    if (total_weight > 0.0 && channel.rms_volts > 0.0) {
      for (const Band& band : channel.bands) {
        if (band.weight <= 0.0) continue;
        const auto n = static_cast<std::size_t>(std::max<long>(
            1, std::lround((band.high_hz - band.low_hz) /
                           profile.component_spacing_hz)));
        const double band_rms =
            channel.rms_volts * std::sqrt(band.weight / total_weight);
        const double amp = band_rms * std::sqrt(2.0 / static_cast<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
          components.push_back(
              {amp, two_pi * rng.uniform(band.low_hz, band.high_hz),
               rng.uniform(0.0, two_pi)});
        }
      }
    }
    const double envelope_phase = rng.uniform(0.0, two_pi);

    // Keep the summed peak inside the raw envelope.
    double peak = 0.0;
    for (const Component& comp : components) peak += comp.amp;
    peak *= 1.0 + profile.envelope_depth;
    if (peak > kRawEnvelopeVolts) {
      const double scale = kRawEnvelopeVolts / peak;
      for (Component& comp : components) comp.amp *= scale;
    }

    std::vector<double> samples(sample_count, 0.0);
    const double env_omega = two_pi * profile.envelope_rate_hz;
    for (std::size_t i = 0; i < sample_count; ++i) {
      const double t = static_cast<double>(i) * dt;
      double sum = 0.0;
      for (const Component& comp : components)
        sum += comp.amp * std::sin(comp.omega * t + comp.phase);
      const double envelope =
          1.0 + profile.envelope_depth * std::sin(env_omega * t + envelope_phase);
      samples[i] = profile.amplifier_gain * envelope * sum;
    }
    rec.channels.push_back(std::move(samples));
  }
  return rec;
}

// Default three-channel profiles. Every class occupies its own spectral
// band and its own per-channel amplitude pattern, so both the 9-feature
// time-domain path and the 24-feature frequency-domain path can separate
// them. Rest is a low-level broadband floor.
inline const std::array<SynthProfile, kGestureCount>& default_profiles() {
  static const std::array<SynthProfile, kGestureCount> profiles = [] {
    std::array<SynthProfile, kGestureCount> p;

    auto active_channel = [](double rms, double low, double high) {
      ChannelSynth ch;
      ch.rms_volts = rms;
      ch.bands = {{low, high, 1.0}, {20.0, 450.0, 0.02}};
      return ch;
    };
    auto rest_channel = [](double rms) {
      ChannelSynth ch;
      ch.rms_volts = rms;
      ch.bands = {{20.0, 450.0, 1.0}};
      return ch;
    };

    SynthProfile& rest = p[ordinal(Gesture::Rest)];
    rest.channels = {rest_channel(5e-5), rest_channel(5e-5), rest_channel(5e-5)};
    rest.envelope_rate_hz = 0.4;
    rest.envelope_depth = 0.05;

    SynthProfile& open = p[ordinal(Gesture::Open)];
    open.channels = {active_channel(1.2e-3, 30.0, 85.0),
                     active_channel(4e-4, 30.0, 85.0),
                     active_channel(1.5e-4, 30.0, 85.0)};
    open.envelope_rate_hz = 1.2;
    open.envelope_depth = 0.3;

    SynthProfile& grasp = p[ordinal(Gesture::Grasp)];
    grasp.channels = {active_channel(3e-4, 105.0, 165.0),
                      active_channel(1.3e-3, 105.0, 165.0),
                      active_channel(4e-4, 105.0, 165.0)};
    grasp.envelope_rate_hz = 1.6;
    grasp.envelope_depth = 0.35;

    SynthProfile& cw = p[ordinal(Gesture::RotateCw)];
    cw.channels = {active_channel(1.5e-4, 195.0, 255.0),
                   active_channel(4e-4, 195.0, 255.0),
                   active_channel(1.2e-3, 195.0, 255.0)};
    cw.envelope_rate_hz = 2.0;
    cw.envelope_depth = 0.3;

    SynthProfile& ccw = p[ordinal(Gesture::RotateCcw)];
    ccw.channels = {active_channel(8e-4, 300.0, 370.0),
                    active_channel(8e-4, 300.0, 370.0),
                    active_channel(8e-4, 300.0, 370.0)};
    ccw.envelope_rate_hz = 0.9;
    ccw.envelope_depth = 0.25;

    return p;
  }();
  return profiles;
}

}  // namespace emg
