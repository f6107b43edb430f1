// Minimal end-to-end use of the library: synthesize a labeled dataset,
// train the 9-feature time-domain classifier, and print its confusion
// matrix on the held-out split.

#include <cstdio>
#include <iostream>

#include "emg/emg.hpp"

int main() {
  using namespace emg;

  AdcConfig adc;
  std::vector<Window> windows;
  for (Gesture g : kAllGestures) {
    const Recording rec =
        synthesize_emg(g, 10.0, adc, /*seed=*/7, default_profiles()[ordinal(g)]);
    auto w = window_stream(rec, 128, 128, g);
    windows.insert(windows.end(), w.begin(), w.end());
  }

  TrainConfig cfg;
  cfg.seed = 7;
  const PipelineResult result =
      train_pipeline(windows, FeaturePath::TimeDomain, cfg);
  std::printf("trained %d epochs, test accuracy %.4f\n",
              result.report.epochs_run, result.report.test_accuracy);

  Dataset data;
  for (const Window& w : windows)
    data.add(extract_features(w, result.network), ordinal(*w.label));
  const ConfusionMatrix cm = evaluate(result.network, data);
  std::cout << to_csv(cm);
  std::printf("overall accuracy %.4f\n", accuracy(cm));
  return 0;
}
