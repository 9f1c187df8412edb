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
#include "tdoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "tdoa/crlb.hpp"
#include "tdoa/errors.hpp"

namespace tdoa {

ScenarioConfig ScenarioConfig::method_comparison() {
  ScenarioConfig cfg;
  cfg.scenario = Scenario::method_comparison;
  cfg.snr_inband_grid_db = snr_grid(-14.0, 20.0, 1.0);
  cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
  cfg.element_counts = {16};
  return cfg;
}

ScenarioConfig ScenarioConfig::element_sweep() {
  ScenarioConfig cfg;
  cfg.scenario = Scenario::element_sweep;
  cfg.snr_inband_grid_db = snr_grid(-14.0, 20.0, 1.0);
  cfg.methods = {Method::msif};
  cfg.element_counts = {2, 4, 8, 16};
  return cfg;
}

void ScenarioConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (snr_inband_grid_db.empty()) throw ConfigError("SNR grid is empty");
  if (methods.empty()) throw ConfigError("method list is empty");
  if (element_counts.empty()) throw ConfigError("element count list is empty");
  if (scenario == Scenario::method_comparison &&
      element_counts != std::vector<int>{16}) {
    throw ConfigError("the method comparison scenario runs at M = 16 only");
  }
  if (scenario == Scenario::element_sweep &&
      methods != std::vector<Method>{Method::msif}) {
    throw ConfigError("the element sweep scenario runs MSIF only");
  }
  for (double s : snr_inband_grid_db) {
    if (!std::isfinite(s)) throw ConfigError("SNR grid values must be finite");
  }
  for (int m : element_counts) {
    ArrayConfig a = array;
    a.num_elements = m;
    a.validate();
  }
  src.validate();
  try {
    welch.validate(src.num_samples());
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (!(max_lag_s >= 0.0) ||
      max_lag_s * src.sample_rate_hz > static_cast<double>(welch.window_len / 2) + 1e-9) {
    throw ConfigError("max_lag_s must lie within half the Welch window");
  }
}

std::vector<double> snr_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw ConfigError("SNR grid needs step > 0 and max >= min");
  }
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

std::vector<RmseRow> RmseTable::curve(Method method, int num_elements) const {
  std::vector<RmseRow> out;
  for (const RmseRow& r : rows) {
    if (r.method == method && r.num_elements == num_elements) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const RmseRow& a, const RmseRow& b) {
    return a.snr_in_db < b.snr_in_db;
  });
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, double snr_in_db,
                         int num_elements, long trial_index) {
  // SNR enters at millidecibel resolution so equal grid values seed equally.
  const auto snr_key = static_cast<std::int64_t>(std::llround(snr_in_db * 1000.0));
  return derive_seed(base_seed, {static_cast<std::uint64_t>(snr_key),
                                 static_cast<std::uint64_t>(num_elements),
                                 static_cast<std::uint64_t>(trial_index)});
}

std::vector<double> run_trial_methods(const ScenarioConfig& cfg,
                                      double snr_in_db, int num_elements,
                                      long trial_index) {
  cfg.validate();
  SourceConfig src = cfg.src;
  src.snr_inband_db = snr_in_db;
  ArrayConfig arr = cfg.array;
  arr.num_elements = num_elements;

  const SensorRecording rec = synth_recording(
      src, arr, trial_seed(cfg.base_seed, snr_in_db, num_elements, trial_index));
  const SensorPair pair{static_cast<std::size_t>(arr.ref_index),
                        static_cast<std::size_t>(arr.other_index)};
  const std::vector<DelayEstimate> est =
      estimate_pair(rec, cfg.methods, cfg.welch, cfg.max_lag_s, pair);

  const double truth_s =
      (rec.true_delays_samples[pair.other] - rec.true_delays_samples[pair.ref]) /
      src.sample_rate_hz;
  std::vector<double> errors(est.size());
  for (std::size_t k = 0; k < est.size(); ++k) errors[k] = est[k].delay_s - truth_s;
  return errors;
}

double run_trial(const ScenarioConfig& cfg, double snr_in_db, int num_elements,
                 Method method, long trial_index) {
  ScenarioConfig one = cfg;
  one.methods = {method};
  return run_trial_methods(one, snr_in_db, num_elements, trial_index).front();
}

RmseTable run_scenario(const ScenarioConfig& cfg, unsigned workers,
                       const ProgressFn& progress) {
  cfg.validate();
  struct Cell {
    double snr;
    int m;
  };
  std::vector<Cell> cells;
  for (int m : cfg.element_counts) {
    for (double snr : cfg.snr_inband_grid_db) cells.push_back({snr, m});
  }
  const auto trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t total = cells.size() * trials;

  // errors[(cell * trials + trial) * n_methods + method]
  std::vector<double> errors(total * n_methods, 0.0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (;;) {
        const std::size_t unit = next.fetch_add(1);
        if (unit >= total) break;
        const Cell& c = cells[unit / trials];
        const auto trial = static_cast<long>(unit % trials);
        const std::vector<double> e = run_trial_methods(cfg, c.snr, c.m, trial);
        std::copy(e.begin(), e.end(), errors.begin() + static_cast<std::ptrdiff_t>(unit * n_methods));
        const std::size_t finished = done.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(finished, total);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(total);
    }
  };

  const unsigned n_workers = std::max(1u, workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RmseTable table;
  std::vector<double> buf(trials);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      double sum = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        buf[t] = errors[(ci * trials + t) * n_methods + mi];
        sum += buf[t];
      }
      RmseRow row;
      row.method = cfg.methods[mi];
      row.num_elements = cells[ci].m;
      row.snr_in_db = cells[ci].snr;
      row.snr_broadband_db = snr_inband_to_broadband(cells[ci].snr, cfg.src);
      row.trials = cfg.trials;
      row.rmse_s = rmse(buf);
      row.mean_error_s = sum / static_cast<double>(trials);
      row.crlb_std_s = crlb({cells[ci].snr, cfg.src.duration_s,
                             cfg.src.center_hz, cfg.src.bandwidth_hz})
                           .std_s;
      table.rows.push_back(row);
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const RmseRow& a, const RmseRow& b) {
                     if (a.method != b.method) return a.method < b.method;
                     if (a.num_elements != b.num_elements) {
                       return a.num_elements < b.num_elements;
                     }
                     return a.snr_in_db < b.snr_in_db;
                   });
  return table;
}

std::optional<double> threshold_snr(std::span<const RmseRow> curve,
                                    double factor) {
  std::optional<double> threshold;
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (!(it->rmse_s <= factor * it->crlb_std_s)) break;
    threshold = it->snr_in_db;
  }
  return threshold;
}

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw ArgumentError("rmse: empty error list");
  double acc = 0.0;
  for (double e : errors) acc += e * e;
  return std::sqrt(acc / static_cast<double>(errors.size()));
}

}  // namespace tdoa
