// emgpipe: synthesize, inspect, train, classify, evaluate, benchmark and
// simulate the EMG gesture pipeline from the command line.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emg/emg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::size_t window_len = 128;
  std::size_t stride = 128;
};

// Collect .csv files from a mix of file and directory arguments,
// deterministically ordered.
std::vector<fs::path> collect_csv_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
          files.push_back(entry.path());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw emg::Error("input not found: " + input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw emg::Error("no .csv inputs found");
  return files;
}

std::vector<emg::LabeledRecording> load_labeled(
    const std::vector<std::string>& inputs) {
  std::vector<emg::LabeledRecording> recordings;
  for (const fs::path& file : collect_csv_files(inputs)) {
    emg::LoadedRecording loaded = emg::load_recording(file);
    if (!loaded.label)
      throw emg::Error("recording has no gesture label: " + file.string());
    recordings.push_back({std::move(loaded.recording), *loaded.label});
  }
  for (std::size_t i = 1; i < recordings.size(); ++i) {
    if (recordings[i].recording.sample_rate_hz !=
        recordings[0].recording.sample_rate_hz)
      throw emg::Error("recordings disagree in sample rate");
    if (recordings[i].recording.channel_count() !=
        recordings[0].recording.channel_count())
      throw emg::Error("recordings disagree in channel count");
  }
  return recordings;
}

emg::Gesture parse_gesture(const std::string& name) {
  const auto g = emg::gesture_from_string(name);
  if (!g)
    throw emg::Error("unknown gesture '" + name +
                     "' (expected one of rest, open, grasp, rotate_cw, "
                     "rotate_ccw)");
  return *g;
}

emg::FeaturePath parse_path(const std::string& tag) {
  const auto p = emg::feature_path_from_string(tag);
  if (!p) throw emg::Error("unknown feature path '" + tag + "' (td or fd)");
  return *p;
}

json report_to_json(const emg::TrainReport& r, emg::FeaturePath path) {
  return json{{"feature_path", emg::to_string(path)},
              {"train_accuracy", r.train_accuracy},
              {"validation_accuracy", r.validation_accuracy},
              {"test_accuracy", r.test_accuracy},
              {"train_count", r.train_count},
              {"validation_count", r.validation_count},
              {"test_count", r.test_count},
              {"epochs_run", r.epochs_run},
              {"wall_time_s", r.wall_time_s},
              {"final_train_loss", r.final_train_loss},
              {"best_validation_loss", r.best_validation_loss}};
}

json path_bench_to_json(const emg::PathBench& b) {
  return json{{"test_accuracy", b.test_accuracy},
              {"train_accuracy", b.train_accuracy},
              {"validation_accuracy", b.validation_accuracy},
              {"extraction_ms_per_window", b.extraction_ms_per_window},
              {"training_epochs", b.training_epochs},
              {"training_time_s", b.training_time_s}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw emg::Error("cannot write: " + path.string());
  os << text;
}

// -------- synth --------

int run_synth(const std::string& output_dir, const std::string& gesture,
              double duration_s, double rate, std::uint64_t seed, double gain) {
  emg::AdcConfig cfg;
  cfg.sample_rate_hz = rate;
  fs::create_directories(output_dir);

  std::vector<emg::Gesture> gestures;
  if (gesture.empty())
    gestures.assign(emg::kAllGestures.begin(), emg::kAllGestures.end());
  else
    gestures.push_back(parse_gesture(gesture));

  for (emg::Gesture g : gestures) {
    emg::SynthProfile profile = emg::default_profiles()[emg::ordinal(g)];
    if (gain > 0.0) profile.amplifier_gain = gain;
    const emg::Recording rec =
        emg::synthesize_emg(g, duration_s, cfg, seed, profile);
    const fs::path file =
        fs::path(output_dir) / (std::string(emg::to_string(g)) + ".csv");
    emg::save_recording(file, rec, g);
    std::cout << file.string() << ": " << rec.channel_count() << " channels, "
              << rec.sample_count() << " samples\n";
  }
  return 0;
}

// -------- features --------

int run_features(const std::string& input, const std::string& output,
                 const std::string& path_tag, const CommonOptions& opt,
                 const std::string& model_path) {
  const emg::FeaturePath path = parse_path(path_tag);
  const emg::LoadedRecording loaded = emg::load_recording(input);
  const std::vector<emg::Window> windows = emg::window_stream(
      loaded.recording, opt.window_len, opt.stride, loaded.label);
  if (windows.empty())
    throw emg::Error("recording shorter than one window of " +
                     std::to_string(opt.window_len) + " samples");

  std::string order;
  std::string selection_source;
  std::vector<std::vector<double>> rows;
  if (path == emg::FeaturePath::TimeDomain) {
    order = emg::kTdFeatureOrder;
    for (const emg::Window& w : windows) rows.push_back(emg::extract_td(w));
  } else {
    emg::BinSelection sel;
    if (!model_path.empty()) {
      const emg::Network net = emg::load_model(model_path);
      if (!net.bin_selection)
        throw emg::Error("model has no bin selection: " + model_path);
      sel = *net.bin_selection;
    } else {
      sel = emg::select_bins(windows);
    }
    selection_source = sel.source;
    order = emg::kFdFeatureOrder;
    for (const emg::Window& w : windows) rows.push_back(emg::extract_fd(w, sel));
  }

  std::ostringstream os;
  os << "# features=" << emg::to_string(path) << "\n";
  os << "# window=" << opt.window_len << "\n# stride=" << opt.stride << "\n";
  os << "# order=" << order << "\n";
  if (!selection_source.empty()) os << "# selection=" << selection_source << "\n";
  if (loaded.label) os << "# gesture=" << emg::to_string(*loaded.label) << "\n";
  for (std::size_t i = 0; i < rows[0].size(); ++i)
    os << (i ? "," : "") << "f" << i;
  if (loaded.label) os << ",label";
  os << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", row[i]);
      os << (i ? "," : "") << buf;
    }
    if (loaded.label) os << ',' << emg::to_string(*loaded.label);
    os << "\n";
  }
  if (output.empty())
    std::cout << os.str();
  else
    write_text(output, os.str());
  return 0;
}

// -------- train --------

int run_train(const std::vector<std::string>& inputs, const std::string& output,
              const std::string& path_tag, const CommonOptions& opt,
              const emg::TrainConfig& cfg, const std::string& report_path) {
  const emg::FeaturePath path = parse_path(path_tag);
  const auto recordings = load_labeled(inputs);
  const std::vector<emg::Window> windows =
      emg::windows_from(recordings, opt.window_len, opt.stride);
  if (windows.empty()) throw emg::Error("inputs yield no complete windows");

  const emg::PipelineResult result = emg::train_pipeline(windows, path, cfg);
  emg::save_model(result.network, output);

  json report = report_to_json(result.report, path);
  report["model_path"] = output;
  report["window_count"] = windows.size();
  if (report_path.empty())
    std::cout << report.dump(2) << "\n";
  else
    write_text(report_path, report.dump(2) + "\n");
  std::cout << "model written to " << output << "\n";
  return 0;
}

// -------- classify --------

int run_classify(const std::string& model_path, const std::string& input,
                 const std::string& output, const std::string& path_tag,
                 const CommonOptions& opt) {
  const emg::Network net = emg::load_model(model_path);
  if (!path_tag.empty()) {
    const emg::FeaturePath requested = parse_path(path_tag);
    if (requested != net.path)
      throw emg::Error(
          "feature path mismatch: model expects " +
          std::string(emg::to_string(net.path)) + " (" +
          std::to_string(net.input_dim) + "-dim input), --features " +
          path_tag + " would produce a different dimension");
  }
  const emg::LoadedRecording loaded = emg::load_recording(input);
  const std::vector<emg::Window> windows =
      emg::window_stream(loaded.recording, opt.window_len, opt.stride);
  const emg::StreamResult stream = emg::classify_stream(net, windows);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary);
    if (!file) throw emg::Error("cannot write: " + output);
    os = &file;
  }
  for (std::size_t i = 0; i < stream.predictions.size(); ++i) {
    const emg::Prediction& p = stream.predictions[i];
    const double t = static_cast<double>(i * opt.stride + opt.window_len) /
                     loaded.recording.sample_rate_hz;
    json line{{"window", i},
              {"time_s", t},
              {"gesture", emg::to_string(p.gesture)},
              {"confidence", p.confidence},
              {"probabilities", p.probabilities},
              {"latency_us", stream.latency_s[i] * 1e6}};
    *os << line.dump() << "\n";
  }
  return 0;
}

// -------- eval --------

int run_eval(const std::string& model_path, const std::vector<std::string>& inputs,
             const std::string& output_prefix, const CommonOptions& opt) {
  const emg::Network net = emg::load_model(model_path);
  const auto recordings = load_labeled(inputs);
  const std::vector<emg::Window> windows =
      emg::windows_from(recordings, opt.window_len, opt.stride);
  if (windows.empty()) throw emg::Error("inputs yield no complete windows");

  emg::Dataset data;
  for (const emg::Window& w : windows)
    data.add(emg::extract_features(w, net), emg::ordinal(*w.label));
  const emg::ConfusionMatrix cm = emg::evaluate(net, data);
  const double acc = emg::accuracy(cm);

  json metrics{{"accuracy", acc},
               {"total", cm.total()},
               {"classes", emg::gesture_names()}};
  auto& rows = metrics["confusion"] = json::array();
  for (int t = 0; t < emg::kGestureCount; ++t)
    rows.push_back(cm.counts[t]);

  if (output_prefix.empty()) {
    std::cout << emg::to_csv(cm) << metrics.dump(2) << "\n";
  } else {
    write_text(output_prefix + ".confusion.csv", emg::to_csv(cm));
    write_text(output_prefix + ".metrics.json", metrics.dump(2) + "\n");
  }
  std::printf("accuracy: %.4f (%llu/%llu)\n", acc,
              static_cast<unsigned long long>(cm.trace()),
              static_cast<unsigned long long>(cm.total()));
  return 0;
}

// -------- bench --------

int run_bench(const std::vector<std::string>& inputs, int trials,
              std::uint64_t seed, double duration_s, bool slopes,
              const std::string& output, const CommonOptions& opt,
              const emg::TrainConfig& cfg) {
  std::vector<emg::LabeledRecording> recordings;
  if (inputs.empty()) {
    emg::AdcConfig adc;
    for (emg::Gesture g : emg::kAllGestures)
      recordings.push_back(
          {emg::synthesize_emg(g, duration_s, adc, seed,
                               emg::default_profiles()[emg::ordinal(g)]),
           g});
  } else {
    recordings = load_labeled(inputs);
  }

  emg::BenchReport report =
      emg::benchmark(recordings, trials, opt.window_len, opt.stride, cfg);
  if (slopes) report.slopes = emg::measure_complexity_slopes();

  json out{{"td", path_bench_to_json(report.td)},
           {"fd", path_bench_to_json(report.fd)},
           {"machine", report.machine},
           {"window_count", report.window_count},
           {"trials", report.trials}};
  if (report.slopes) {
    out["slopes"] = {{"window_sizes", report.slopes->window_sizes},
                     {"td_ms_per_window", report.slopes->td_ms_per_window},
                     {"fd_ms_per_window", report.slopes->fd_ms_per_window},
                     {"td_slope", report.slopes->td_slope},
                     {"fd_slope", report.slopes->fd_slope}};
  }
  if (!output.empty()) write_text(output, out.dump(2) + "\n");
  std::cout << emg::render_table(report);
  return 0;
}

// -------- simulate --------

int run_simulate(const std::string& model_path, const std::string& input,
                 const std::string& forces_path, const std::string& output,
                 const CommonOptions& opt) {
  const emg::Network net = emg::load_model(model_path);
  const emg::LoadedRecording loaded = emg::load_recording(input);
  std::vector<emg::ForcePoint> timeline;
  if (!forces_path.empty()) timeline = emg::load_force_timeline(forces_path);

  emg::SimConfig sim;
  sim.window_len = opt.window_len;
  sim.stride = opt.stride;
  const emg::FsrModel fsr;
  const std::vector<emg::TraceSample> trace =
      emg::run_simulation(net, loaded.recording, fsr, timeline, sim);

  if (!output.empty() && fs::path(output).extension() == ".json") {
    json rows = json::array();
    for (const emg::TraceSample& s : trace) {
      rows.push_back({{"time_s", s.time_s},
                      {"gesture", emg::to_string(s.classified)},
                      {"confidence", s.confidence},
                      {"movement", emg::to_string(s.state.movement)},
                      {"thumb_deg", s.state.thumb_deg},
                      {"finger_deg", s.state.finger_deg},
                      {"wrist_deg", s.state.wrist_deg},
                      {"vibration_v", s.state.vibration_v}});
    }
    write_text(output, rows.dump(2) + "\n");
  } else if (!output.empty()) {
    emg::write_trace_csv(output, trace);
  } else {
    const fs::path tmp = fs::temp_directory_path() / "emgpipe_trace.csv";
    emg::write_trace_csv(tmp, trace);
    std::ifstream in(tmp, std::ios::binary);
    std::cout << in.rdbuf();
    fs::remove(tmp);
  }
  std::cerr << trace.size() << " trace samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMG gesture classification and prosthetic-hand simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "emgpipe 0.1.0");

  CommonOptions opt;
  emg::TrainConfig train_cfg;
  std::vector<std::string> inputs;
  std::string input, output, model, features_tag, gesture, forces, report_path;
  std::uint64_t seed = 0;
  double rate = 2000.0, duration = 20.0, gain = 0.0;
  int trials = 5;
  bool slopes = false;

  auto add_window_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--window", opt.window_len,
                    "Window length in samples (power of two)")
        ->capture_default_str();
    cmd->add_option("--stride", opt.stride, "Window stride in samples")
        ->capture_default_str();
  };
  auto add_train_flags = [&train_cfg, &seed](CLI::App* cmd) {
    cmd->add_option("--epochs", train_cfg.max_epochs, "Maximum training epochs")
        ->capture_default_str();
    cmd->add_option("--lr", train_cfg.learning_rate, "Learning rate")
        ->capture_default_str();
    cmd->add_option("--patience", train_cfg.patience,
                    "Early-stopping patience (epochs)")
        ->capture_default_str();
    cmd->add_option("--val-fraction", train_cfg.validation_fraction,
                    "Validation split fraction")
        ->capture_default_str();
    cmd->add_option("--test-fraction", train_cfg.test_fraction,
                    "Test split fraction")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for all randomized work")
        ->capture_default_str();
  };

  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize labeled EMG recordings (one CSV per gesture)");
  synth->add_option("--output", output, "Output directory")->required();
  synth->add_option("--gesture", gesture,
                    "Only this gesture (default: all five)");
  synth->add_option("--duration", duration, "Recording length in seconds")
      ->capture_default_str();
  synth->add_option("--rate", rate, "Sample rate in Hz")->capture_default_str();
  synth->add_option("--seed", seed, "Seed for all randomized work")
      ->capture_default_str();
  synth->add_option("--gain", gain,
                    "Override amplifier gain (default: profile's gain)");

  CLI::App* features = app.add_subcommand(
      "features", "Extract per-window feature tables from a recording");
  features->add_option("--input", input, "Recording CSV")->required();
  features->add_option("--output", output, "Feature table CSV (default stdout)");
  features->add_option("--features", features_tag, "Feature path: td or fd")
      ->required();
  features->add_option("--model", model,
                       "Model file supplying the frequency-bin selection");
  add_window_flags(features);

  CLI::App* train = app.add_subcommand(
      "train", "Train a gesture classifier from labeled recordings");
  train->add_option("--input", inputs, "Labeled recording CSVs or directories")
      ->required();
  train->add_option("--output", output, "Model file to write")->required();
  train->add_option("--features", features_tag, "Feature path: td or fd")
      ->required();
  train->add_option("--report", report_path,
                    "Training report JSON (default stdout)");
  add_window_flags(train);
  add_train_flags(train);

  CLI::App* classify = app.add_subcommand(
      "classify", "Stream per-window predictions as JSON lines");
  classify->add_option("--model", model, "Model file")->required();
  classify->add_option("--input", input, "Recording CSV")->required();
  classify->add_option("--output", output, "JSON-lines file (default stdout)");
  classify->add_option("--features", features_tag,
                       "Assert the model's feature path (td or fd)");
  add_window_flags(classify);

  CLI::App* evaluate = app.add_subcommand(
      "eval", "Evaluate a model: confusion matrix and accuracy");
  evaluate->add_option("--model", model, "Model file")->required();
  evaluate->add_option("--input", inputs, "Labeled recording CSVs or directories")
      ->required();
  evaluate->add_option("--output", output,
                       "Output prefix for .confusion.csv and .metrics.json");
  add_window_flags(evaluate);

  CLI::App* bench = app.add_subcommand(
      "bench", "Benchmark the td and fd paths head to head");
  bench->add_option("--input", inputs,
                    "Labeled recording CSVs or directories (default: "
                    "synthesized dataset)");
  bench->add_option("--trials", trials, "Timing trials (median taken)")
      ->capture_default_str();
  bench->add_option("--duration", duration,
                    "Seconds per synthesized recording when no input given")
      ->capture_default_str();
  bench->add_flag("--slopes", slopes,
                  "Also fit complexity slopes over window sizes 128..4096");
  bench->add_option("--output", output, "Report JSON file");
  add_window_flags(bench);
  add_train_flags(bench);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Classify a recording and drive the simulated hand");
  simulate->add_option("--model", model, "Model file")->required();
  simulate->add_option("--input", input, "Recording CSV")->required();
  simulate->add_option("--forces", forces,
                       "Force timeline CSV: time_s,f1..f5 (default: zero)");
  simulate->add_option("--output", output,
                       "Trace file (.csv or .json; default stdout CSV)");
  add_window_flags(simulate);

  try {
    app.parse(argc, argv);
    train_cfg.seed = seed;
    if (synth->parsed())
      return run_synth(output, gesture, duration, rate, seed, gain);
    if (features->parsed())
      return run_features(input, output, features_tag, opt, model);
    if (train->parsed())
      return run_train(inputs, output, features_tag, opt, train_cfg, report_path);
    if (classify->parsed())
      return run_classify(model, input, output, features_tag, opt);
    if (evaluate->parsed()) return run_eval(model, inputs, output, opt);
    if (bench->parsed())
      return run_bench(inputs, trials, seed, duration, slopes, output, opt,
                       train_cfg);
    if (simulate->parsed())
      return run_simulate(model, input, forces, output, opt);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return code == 0 ? 1 : code;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
