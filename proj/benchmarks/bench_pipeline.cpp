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

#include <benchmark/benchmark.h>

#include "tdoa/gcc.hpp"
#include "tdoa/harness.hpp"
#include "tdoa/sigmodel.hpp"
#include "tdoa/spectral.hpp"

namespace {

using tdoa::Method;

tdoa::SensorRecording make_recording(int elements) {
  tdoa::SourceConfig src;
  src.snr_inband_db = 0.0;
  tdoa::ArrayConfig arr;
  arr.num_elements = elements;
  return tdoa::synth_recording(src, arr, 7);
}

void BM_SynthRecording(benchmark::State& state) {
  tdoa::SourceConfig src;
  tdoa::ArrayConfig arr;
  arr.num_elements = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tdoa::synth_recording(src, arr, ++seed));
  }
}
BENCHMARK(BM_SynthRecording)->Arg(2)->Arg(16);

void BM_EstimateSpectra(benchmark::State& state) {
  const auto rec = make_recording(16);
  const auto mean = tdoa::mean_signal(rec);
  const tdoa::WelchConfig wcfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tdoa::estimate_spectra(
        rec.channels[0], rec.channels[1], mean, wcfg, rec.sample_rate_hz));
  }
}
BENCHMARK(BM_EstimateSpectra);

void BM_ComputeWeight(benchmark::State& state) {
  const auto rec = make_recording(16);
  const auto mean = tdoa::mean_signal(rec);
  const auto s = tdoa::estimate_spectra(rec.channels[0], rec.channels[1], mean,
                                        tdoa::WelchConfig{}, rec.sample_rate_hz);
  const auto method = tdoa::kAllMethods[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) {
    benchmark::DoNotOptimize(tdoa::compute_weight(method, s));
  }
  state.SetLabel(std::string(tdoa::to_string(method)));
}
BENCHMARK(BM_ComputeWeight)->DenseRange(0, 4);

void BM_EstimatePair(benchmark::State& state) {
  const auto rec = make_recording(16);
  const tdoa::WelchConfig wcfg;
  const double max_lag = tdoa::default_max_lag_s(wcfg, rec.sample_rate_hz);
  const auto method = tdoa::kAllMethods[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) {
    benchmark::DoNotOptimize(tdoa::estimate_pair(rec, method, wcfg, max_lag));
  }
  state.SetLabel(std::string(tdoa::to_string(method)));
}
BENCHMARK(BM_EstimatePair)->DenseRange(0, 4);

void BM_TrialAllMethods(benchmark::State& state) {
  const auto cfg = tdoa::ScenarioConfig::method_comparison();
  long trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tdoa::run_trial_methods(cfg, 0.0, 16, trial++));
  }
}
BENCHMARK(BM_TrialAllMethods);

}  // namespace

BENCHMARK_MAIN();
