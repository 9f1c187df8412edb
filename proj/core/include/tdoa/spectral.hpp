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

// Welch-averaged spectral estimation: framing, windowing, auto and cross
// power spectra, and magnitude-squared coherence.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tdoa {

enum class WindowKind { hamming, rectangular };

struct WelchConfig {
  std::size_t window_len = 480;
  double overlap_fraction = 0.75;
  WindowKind window = WindowKind::hamming;

  // round(window_len * (1 - overlap_fraction)), at least 1.
  std::size_t hop() const;
  // The transform length equals the window length (no zero padding).
  std::size_t fft_len() const { return window_len; }
  std::size_t num_bins() const { return window_len / 2 + 1; }
  std::size_t num_frames(std::size_t signal_len) const;

  // Throws ArgumentError.
  void validate() const;
  void validate(std::size_t signal_len) const;
};

// Upper guard on |gamma|^2 so that gamma^2 / (1 - gamma^2) stays finite.
inline constexpr double kCoherenceEpsilon = 1e-6;

struct SpectrumSet {
  std::vector<double> freq_hz;
  std::vector<double> g11;
  std::vector<double> g22;
  std::vector<std::complex<double>> g12;
  // Auto spectrum of the mean signal; empty when not requested.
  std::vector<double> p_mean;
  std::vector<double> coherence_sq;

  std::size_t num_bins() const { return freq_hz.size(); }
};

// Periodic (DFT-even) window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

// Frames at hop cfg.hop(), each multiplied by the window.
std::vector<std::vector<double>> frame_signal(std::span<const double> x,
                                              const WelchConfig& cfg);

// Frame-averaged one-sided |X|^2 divided by (sum w^2 * frame count).
std::vector<double> welch_auto(std::span<const double> x,
                               const WelchConfig& cfg);

// Frame-averaged conj(X1) X2 with the welch_auto normalization.
std::vector<std::complex<double>> welch_cross(std::span<const double> x1,
                                              std::span<const double> x2,
                                              const WelchConfig& cfg);

// |g12|^2 / (g11 g22) without the upper clamp; 0 where the denominator is 0.
std::vector<double> raw_coherence_sq(const SpectrumSet& s);

// raw_coherence_sq clamped to [0, 1 - kCoherenceEpsilon].
std::vector<double> coherence_sq(const SpectrumSet& s);

// One pass over the frames of a sensor pair (and optionally the mean signal)
// filling every field of SpectrumSet, coherence included.
SpectrumSet estimate_spectra(std::span<const double> x1,
                             std::span<const double> x2,
                             std::span<const double> x_mean,
                             const WelchConfig& cfg, double sample_rate_hz);

}  // namespace tdoa
