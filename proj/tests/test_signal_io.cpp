#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "emg/csv.hpp"
#include "emg/fft.hpp"
#include "emg/filters.hpp"
#include "emg/synth.hpp"
#include "emg/windowing.hpp"
#include "helpers.hpp"

using namespace emg;
using Catch::Matchers::ContainsSubstring;
using testutil::Rng;

namespace {

Recording sine_recording(double freq_hz, double rate_hz, double seconds,
                         double amplitude = 1.0) {
  Recording rec;
  rec.sample_rate_hz = rate_hz;
  const auto n = static_cast<std::size_t>(seconds * rate_hz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                static_cast<double>(i) / rate_hz);
  rec.channels.push_back(std::move(x));
  return rec;
}

double steady_state_rms(const std::vector<double>& x, std::size_t skip) {
  double ss = 0.0;
  for (std::size_t i = skip; i < x.size(); ++i) ss += x[i] * x[i];
  return std::sqrt(ss / static_cast<double>(x.size() - skip));
}

}  // namespace

// ---------- CSV ----------

TEST_CASE("csv round trip with label") {
  testutil::TempDir dir("csv");
  Recording rec;
  rec.sample_rate_hz = 2000.0;
  Rng rng{41};
  for (int c = 0; c < 3; ++c)
    rec.channels.push_back(testutil::random_samples(rng, 4000, -0.5, 0.5));
  save_recording(dir.file("g.csv"), rec, Gesture::Grasp);

  const LoadedRecording loaded = load_recording(dir.file("g.csv"));
  CHECK(loaded.recording.channel_count() == 3);
  CHECK(loaded.recording.sample_count() == 4000);
  CHECK(loaded.recording.sample_rate_hz == 2000.0);
  REQUIRE(loaded.label.has_value());
  CHECK(*loaded.label == Gesture::Grasp);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < 4000; i += 517)
      CHECK(loaded.recording.channels[c][i] ==
            Catch::Approx(rec.channels[c][i]).epsilon(1e-9));
}

TEST_CASE("csv accepts CRLF, blank lines, and no label") {
  testutil::TempDir dir("csv_crlf");
  testutil::write_file(dir.file("r.csv"),
                       "# sample_rate_hz=2000\r\n"
                       "0.1,0.2,0.3\r\n"
                       "\r\n"
                       "-0.1,-0.2,-0.3\r\n");
  const LoadedRecording loaded = load_recording(dir.file("r.csv"));
  CHECK(loaded.recording.channel_count() == 3);
  CHECK(loaded.recording.sample_count() == 2);
  CHECK_FALSE(loaded.label.has_value());
  CHECK(loaded.recording.channels[2][1] == Catch::Approx(-0.3));
}

TEST_CASE("csv error positions") {
  testutil::TempDir dir("csv_err");

  testutil::write_file(dir.file("empty.csv"), "# sample_rate_hz=2000\n");
  CHECK_THROWS_WITH(load_recording(dir.file("empty.csv")),
                    ContainsSubstring("no samples"));

  testutil::write_file(dir.file("ragged.csv"),
                       "# sample_rate_hz=2000\n0.1,0.2,0.3\n0.4,0.5\n");
  CHECK_THROWS_WITH(load_recording(dir.file("ragged.csv")),
                    ContainsSubstring("line 3"));

  testutil::write_file(dir.file("nonnum.csv"),
                       "# sample_rate_hz=2000\n0.1,abc,0.3\n");
  CHECK_THROWS_WITH(load_recording(dir.file("nonnum.csv")),
                    ContainsSubstring("line 2, column 2"));

  testutil::write_file(dir.file("badheader.csv"),
                       "# just a comment\n0.1,0.2\n");
  CHECK_THROWS_WITH(load_recording(dir.file("badheader.csv")),
                    ContainsSubstring("malformed header"));

  testutil::write_file(dir.file("norate.csv"), "# gesture=open\n0.1,0.2\n");
  CHECK_THROWS_WITH(load_recording(dir.file("norate.csv")),
                    ContainsSubstring("sample_rate_hz"));

  testutil::write_file(dir.file("badgesture.csv"),
                       "# sample_rate_hz=2000\n# gesture=wave\n0.1\n");
  CHECK_THROWS_WITH(load_recording(dir.file("badgesture.csv")),
                    ContainsSubstring("unknown gesture"));

  CHECK_THROWS_WITH(load_recording(dir.file("missing.csv")),
                    ContainsSubstring("cannot open"));
}

// ---------- synthesis ----------

TEST_CASE("synthesize is deterministic and sized by duration") {
  const AdcConfig cfg;
  const SynthProfile& profile = default_profiles()[ordinal(Gesture::Rest)];
  const Recording a = synthesize_emg(Gesture::Rest, 1.0, cfg, 7, profile);
  const Recording b = synthesize_emg(Gesture::Rest, 1.0, cfg, 7, profile);
  CHECK(a.channels == b.channels);
  CHECK(a.sample_count() == 2000);
  CHECK(a.channel_count() == 3);

  const Recording c = synthesize_emg(Gesture::Rest, 1.0, cfg, 8, profile);
  CHECK(a.channels != c.channels);
}

TEST_CASE("rest is quieter than every active class") {
  const AdcConfig cfg;
  std::array<double, kGestureCount> level{};
  for (Gesture g : kAllGestures) {
    const Recording rec =
        synthesize_emg(g, 1.0, cfg, 7, default_profiles()[ordinal(g)]);
    double total = 0.0;
    for (const auto& channel : rec.channels) total += testutil::rms(channel);
    level[ordinal(g)] = total;
  }
  for (Gesture g : {Gesture::Open, Gesture::Grasp, Gesture::RotateCw,
                    Gesture::RotateCcw})
    CHECK(level[ordinal(Gesture::Rest)] < level[ordinal(g)]);
}

TEST_CASE("synthesized amplitude stays inside the raw envelope times gain") {
  const AdcConfig cfg;
  for (Gesture g : kAllGestures) {
    const SynthProfile& profile = default_profiles()[ordinal(g)];
    const Recording rec = synthesize_emg(g, 2.0, cfg, 3, profile);
    for (const auto& channel : rec.channels)
      for (double v : channel)
        CHECK(std::abs(v) <= kRawEnvelopeVolts * profile.amplifier_gain + 1e-12);
  }
}

TEST_CASE("synthesized spectrum stays inside the 6-500 Hz band") {
  AdcConfig cfg;
  SynthProfile profile = default_profiles()[ordinal(Gesture::Grasp)];
  profile.amplifier_gain = 1.0;
  const Recording rec = synthesize_emg(Gesture::Grasp, 4.096, cfg, 5, profile);
  const std::span<const double> head(rec.channels[0].data(), 8192);
  const Spectrum s = power_spectrum(head, cfg.sample_rate_hz);
  double in_band = 0.0, out_band = 0.0;
  for (std::size_t k = 0; k < s.bins.size(); ++k) {
    const double f = s.bin_width_hz * static_cast<double>(k);
    if (f < kEmgBandLowHz - 3.0 || f > kEmgBandHighHz + 3.0)
      out_band += s.bins[k];
    else
      in_band += s.bins[k];
  }
  CHECK(out_band < 0.01 * in_band);
}

TEST_CASE("zero-weight profile synthesizes silence") {
  AdcConfig cfg;
  SynthProfile profile;
  profile.channels.assign(2, ChannelSynth{1e-3, {{30.0, 90.0, 0.0}}});
  const Recording rec = synthesize_emg(Gesture::Open, 0.5, cfg, 1, profile);
  for (const auto& channel : rec.channels)
    for (double v : channel) CHECK(v == 0.0);
}

TEST_CASE("synthesize rejects bad inputs") {
  const AdcConfig cfg;
  const SynthProfile& profile = default_profiles()[0];
  CHECK_THROWS_WITH(synthesize_emg(Gesture::Rest, 0.05, cfg, 1, profile),
                    ContainsSubstring("fewer than one"));
  CHECK_THROWS_AS(synthesize_emg(Gesture::Rest, -1.0, cfg, 1, profile), Error);

  SynthProfile bad = profile;
  bad.channels[0].bands[0].low_hz = 2.0;  // below the EMG band
  CHECK_THROWS_AS(synthesize_emg(Gesture::Rest, 1.0, cfg, 1, bad), Error);
}

// ---------- notch filter ----------

TEST_CASE("notch suppresses its tone and passes the rest") {
  // 4 s of pure 50 Hz at 2000 Hz sampling; measure after the transient.
  const Recording mains = sine_recording(50.0, 2000.0, 4.0);
  const Recording filtered = notch_filter(mains, 50.0, 10.0);
  const double in_rms = steady_state_rms(mains.channels[0], 4000);
  const double out_rms = steady_state_rms(filtered.channels[0], 4000);
  CHECK(out_rms <= 0.1 * in_rms);

  const Recording tone200 = sine_recording(200.0, 2000.0, 4.0);
  const Recording passed = notch_filter(tone200, 50.0, 10.0);
  const double in200 = steady_state_rms(tone200.channels[0], 4000);
  const double out200 = steady_state_rms(passed.channels[0], 4000);
  CHECK(out200 >= 0.88 * in200);
  CHECK(out200 <= 1.12 * in200);
}

TEST_CASE("notch passband is flat within 1 dB an octave away") {
  // Tones with an integer number of cycles in the measured span.
  const double low_db = std::pow(10.0, -1.0 / 20.0);
  const double high_db = std::pow(10.0, 1.0 / 20.0);
  for (double freq : {20.0, 25.0, 100.0, 200.0, 500.0}) {
    const Recording rec = sine_recording(freq, 2000.0, 3.0);
    const Recording out = notch_filter(rec, 50.0, 10.0);
    const double gain = steady_state_rms(out.channels[0], 2000) /
                        steady_state_rms(rec.channels[0], 2000);
    CHECK(gain >= low_db);
    CHECK(gain <= high_db);
  }
  // And the transfer function itself vanishes at the notch.
  const NotchCoefficients k = notch_coefficients(50.0, 2000.0, 10.0);
  CHECK(notch_gain(k, 50.0, 2000.0) < 1e-12);
}

TEST_CASE("notch on silence is silence; filter is linear") {
  Recording zeros;
  zeros.sample_rate_hz = 2000.0;
  zeros.channels.assign(2, std::vector<double>(1000, 0.0));
  const Recording out = notch_filter(zeros, 50.0);
  for (const auto& channel : out.channels)
    for (double v : channel) CHECK(v == 0.0);

  Rng rng{55};
  Recording x, y, mix;
  x.channels.push_back(testutil::random_samples(rng, 2000));
  y.channels.push_back(testutil::random_samples(rng, 2000));
  const double a = 1.7, b = -0.4;
  mix.channels.push_back(std::vector<double>(2000));
  for (std::size_t i = 0; i < 2000; ++i)
    mix.channels[0][i] = a * x.channels[0][i] + b * y.channels[0][i];
  const auto fx = notch_filter(x, 50.0);
  const auto fy = notch_filter(y, 50.0);
  const auto fmix = notch_filter(mix, 50.0);
  for (std::size_t i = 0; i < 2000; ++i) {
    const double expected = a * fx.channels[0][i] + b * fy.channels[0][i];
    CHECK(testutil::rel_close(fmix.channels[0][i], expected, 1e-9, 1e-12));
  }
}

TEST_CASE("notch rejects frequencies at or beyond Nyquist") {
  const Recording rec = sine_recording(50.0, 2000.0, 0.5);
  CHECK_THROWS_AS(notch_filter(rec, 1000.0), Error);
  CHECK_THROWS_AS(notch_filter(rec, 1500.0), Error);
  CHECK_THROWS_AS(notch_filter(rec, 0.0), Error);
}

// ---------- quantization ----------

TEST_CASE("quantize snaps to mid-rise levels") {
  AdcConfig cfg;
  cfg.resolution_bits = 1;
  cfg.full_scale_volts = 1.0;

  CHECK(quantize_sample(0.3, cfg) == 0.5);
  CHECK(quantize_sample(-0.3, cfg) == -0.5);
  CHECK(quantize_sample(10.0, cfg) == 0.5);    // clamps to the top level
  CHECK(quantize_sample(-10.0, cfg) == -0.5);  // and the bottom level
  CHECK(quantize_sample(0.5, cfg) == 0.5);     // already on a level

  AdcConfig ten;
  const double step = 2.0 * ten.full_scale_volts / 1024.0;
  const double level = (100 + 0.5) * step;
  CHECK(quantize_sample(level, ten) == level);
}

TEST_CASE("quantization is idempotent") {
  Rng rng{66};
  for (int trial = 0; trial < 20; ++trial) {
    AdcConfig cfg;
    cfg.resolution_bits = 1 + static_cast<int>(rng.next() % 16);
    cfg.full_scale_volts = rng.uniform(0.5, 5.0);
    Recording rec;
    rec.channels.push_back(testutil::random_samples(rng, 500, -6.0, 6.0));
    const Recording once = quantize(rec, cfg);
    const Recording twice = quantize(once, cfg);
    CHECK(once.channels == twice.channels);
  }
}

// ---------- windowing ----------

TEST_CASE("window_stream counts match the closed form") {
  Recording rec;
  rec.sample_rate_hz = 2000.0;
  rec.channels.assign(3, std::vector<double>(256, 1.0));
  CHECK(window_stream(rec, 128, 128).size() == 2);

  rec.channels.assign(3, std::vector<double>(300, 1.0));
  CHECK(window_stream(rec, 128, 128).size() == 2);

  rec.channels.assign(3, std::vector<double>(127, 1.0));
  std::string diagnostic;
  CHECK(window_stream(rec, 128, 128, std::nullopt, &diagnostic).empty());
  CHECK_THAT(diagnostic, ContainsSubstring("shorter than one"));

  Rng rng{77};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + rng.next() % 5000;
    const std::size_t window_len = std::size_t{16} << (rng.next() % 5);
    const std::size_t stride = 1 + rng.next() % 300;
    rec.channels.assign(1, std::vector<double>(len, 0.0));
    const auto windows = window_stream(rec, window_len, stride);
    CHECK(windows.size() == window_count(len, window_len, stride));
    if (!windows.empty()) {
      CHECK(windows.front().length() == window_len);
      CHECK(windows.front().channel_count() == 1);
    }
  }
}

TEST_CASE("window_stream copies the right slices and labels") {
  Recording rec;
  rec.sample_rate_hz = 2000.0;
  std::vector<double> ramp(400);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  rec.channels.push_back(ramp);
  const auto windows = window_stream(rec, 128, 64, Gesture::Open);
  REQUIRE(windows.size() == 5);
  CHECK(windows[1].samples[0][0] == 64.0);
  CHECK(windows[4].samples[0][127] == 383.0);
  for (const Window& w : windows) CHECK(w.label == Gesture::Open);

  CHECK_THROWS_AS(window_stream(rec, 100, 128), Error);  // not a power of two
  CHECK_THROWS_AS(window_stream(rec, 128, 0), Error);
}
