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

// Generalized cross-correlation: weighting functions, weighted correlation,
// coarse peak search and Hilbert zero-crossing subsample refinement.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tdoa/sigmodel.hpp"
#include "tdoa/spectral.hpp"

namespace tdoa {

enum class Method { cc, scot, phat, ml, msif };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::cc, Method::scot, Method::phat, Method::ml, Method::msif};

// Lower-case names: cc, scot, phat, ml, msif.
std::string_view to_string(Method m);
// Case-insensitive.
std::optional<Method> parse_method(std::string_view name);

// Relative denominator guard: denominators are floored at
// kDenominatorGuard * max(denominator).
inline constexpr double kDenominatorGuard = 1e-12;

struct WeightSpectrum {
  std::vector<double> values;
  Method method = Method::cc;
};

struct CorrelationFunction {
  // Centered: values[i] is the correlation at lag (i - size/2) samples.
  std::vector<double> values;
  std::vector<double> lag_axis_s;
  double sample_rate_hz = 0.0;

  std::ptrdiff_t zero_lag_index() const {
    return static_cast<std::ptrdiff_t>(values.size() / 2);
  }
};

struct DelayEstimate {
  double delay_s = 0.0;
  long coarse_lag_samples = 0;
  bool refined = false;
};

// Pointwise mean across channels.
std::vector<double> mean_signal(const SensorRecording& rec);
std::vector<double> mean_signal(std::span<const std::vector<double>> channels);

// CC:   1
// SCOT: 1 / sqrt(g11 g22)
// PHAT: 1 / |g12|
// ML:   (1 / |g12|) * c / (1 - c),  c = coherence_sq
// MSIF: min(p_mean / g11, 1)
// Throws ArgumentError when a spectrum the method needs is missing.
WeightSpectrum compute_weight(Method method, const SpectrumSet& s);

// Inverse transform of w * g12 over an even transform length
// 2 * (bins - 1), rotated so that lag zero sits at index size/2.
CorrelationFunction weighted_correlation(std::span<const std::complex<double>> g12,
                                         const WeightSpectrum& w,
                                         double sample_rate_hz);

// Discrete Hilbert transform: -j sign(f) multiplier, DC and Nyquist zeroed.
std::vector<double> hilbert_shift(std::span<const double> r);

// Coarse argmax of r within |lag| <= max_lag_s, refined to the zero
// crossing of hilbert_shift(r) nearest the peak, located by linear
// interpolation. Crossings are searched across the main lobe of r (the run
// of positive values containing the peak, clipped to the search window, and
// at least the two intervals adjacent to the peak). With no sign change the
// coarse lag is returned with refined = false.
DelayEstimate estimate_delay(const CorrelationFunction& r, double max_lag_s);

// Weight, correlate and pick the delay from precomputed spectra. MSIF needs
// s.p_mean.
DelayEstimate estimate_from_spectra(const SpectrumSet& s, Method method,
                                    double sample_rate_hz, double max_lag_s);

struct SensorPair {
  std::size_t ref = 0;
  std::size_t other = 1;
};

// Delay of channel `pair.other` relative to channel `pair.ref`. MSIF uses
// `pair.ref` as the inverse-filter reference sensor.
DelayEstimate estimate_pair(const SensorRecording& rec, Method method,
                            const WelchConfig& wcfg, double max_lag_s,
                            SensorPair pair = {});

// All requested methods on one shared set of spectra.
std::vector<DelayEstimate> estimate_pair(const SensorRecording& rec,
                                         std::span<const Method> methods,
                                         const WelchConfig& wcfg,
                                         double max_lag_s,
                                         SensorPair pair = {});

// Half the window length, in seconds.
double default_max_lag_s(const WelchConfig& wcfg, double sample_rate_hz);

}  // namespace tdoa
