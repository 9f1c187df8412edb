// Copyright 2026 The tdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Monte Carlo RMSE sweeps over in-band SNR, method and array size, with the
// matching Cramer-Rao bound attached to every row.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tdoa/gcc.hpp"
#include "tdoa/sigmodel.hpp"
#include "tdoa/spectral.hpp"

namespace tdoa {

enum class Scenario {
  method_comparison,  // all methods at one array size
  element_sweep,      // MSIF across array sizes
};

struct ScenarioConfig {
  Scenario scenario = Scenario::method_comparison;
  std::vector<double> snr_inband_grid_db;
  std::vector<Method> methods;
  std::vector<int> element_counts;
  int trials = 2000;
  std::uint64_t base_seed = 1;
  // snr_inband_db is ignored; the grid drives it.
  SourceConfig src;
  // num_elements is ignored; element_counts drives it.
  ArrayConfig array;
  WelchConfig welch;
  double max_lag_s = 0.005;

  // -14..+20 dB in-band at 1 dB, all five methods, M = 16.
  static ScenarioConfig method_comparison();
  // -14..+20 dB in-band at 1 dB, MSIF, M in {2, 4, 8, 16}.
  static ScenarioConfig element_sweep();

  // Throws ConfigError.
  void validate() const;
};

// Inclusive grid lo, lo + step, ..., hi (hi included when it lands on the
// grid within 1e-9 * step).
std::vector<double> snr_grid(double lo, double hi, double step);

struct RmseRow {
  Method method = Method::cc;
  int num_elements = 0;
  double snr_in_db = 0.0;
  double snr_broadband_db = 0.0;
  int trials = 0;
  double rmse_s = 0.0;
  double crlb_std_s = 0.0;
  double mean_error_s = 0.0;
};

struct RmseTable {
  // Sorted by (method, num_elements, snr_in_db).
  std::vector<RmseRow> rows;

  // Rows of one (method, M) curve, ascending in SNR.
  std::vector<RmseRow> curve(Method method, int num_elements) const;
};

// Recording seed for one (snr, M, trial) cell. Independent of the method so
// every method sees the same recording.
std::uint64_t trial_seed(std::uint64_t base_seed, double snr_in_db,
                         int num_elements, long trial_index);

// D_hat - D_true in seconds for a single trial.
double run_trial(const ScenarioConfig& cfg, double snr_in_db, int num_elements,
                 Method method, long trial_index);

// Errors of every cfg.methods entry on one shared recording, in that order.
std::vector<double> run_trial_methods(const ScenarioConfig& cfg,
                                      double snr_in_db, int num_elements,
                                      long trial_index);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Full sweep on up to `workers` threads. Results are merged in a fixed
// order, so the table does not depend on the worker count.
RmseTable run_scenario(const ScenarioConfig& cfg, unsigned workers = 1,
                       const ProgressFn& progress = {});

// Smallest grid SNR from which rmse <= factor * crlb holds at that point and
// every higher one. `curve` must be ascending in SNR.
std::optional<double> threshold_snr(std::span<const RmseRow> curve,
                                    double factor = 5.0);

// sqrt(sum e^2 / n). Throws ArgumentError on an empty list.
double rmse(std::span<const double> errors);

}  // namespace tdoa
