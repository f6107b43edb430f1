#pragma once

// Umbrella header for the whole pipeline.

#include "emg/bench.hpp"
#include "emg/controller.hpp"
#include "emg/csv.hpp"
#include "emg/eval.hpp"
#include "emg/features_fd.hpp"
#include "emg/features_td.hpp"
#include "emg/fft.hpp"
#include "emg/filters.hpp"
#include "emg/model_io.hpp"
#include "emg/network.hpp"
#include "emg/pipeline.hpp"
#include "emg/simulate.hpp"
#include "emg/synth.hpp"
#include "emg/train.hpp"
#include "emg/types.hpp"
#include "emg/windowing.hpp"
