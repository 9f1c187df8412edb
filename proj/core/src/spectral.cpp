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
#include "tdoa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdoa/errors.hpp"
#include "tdoa/fft.hpp"

namespace tdoa {
namespace {

using Complex = std::complex<double>;

double window_power(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

// Windowed transform of x[start, start + w.size()) into `out`.
void frame_spectrum(std::span<const double> x, std::size_t start,
                    const std::vector<double>& w, std::vector<double>& buf,
                    std::vector<Complex>& out) {
  for (std::size_t i = 0; i < w.size(); ++i) buf[i] = x[start + i] * w[i];
  fft::forward(buf, out);
}

void finish(std::vector<double>& v, double scale) {
  for (double& x : v) x *= scale;
}

}  // namespace

std::size_t WelchConfig::hop() const {
  const auto h = static_cast<std::size_t>(
      std::llround(static_cast<double>(window_len) * (1.0 - overlap_fraction)));
  return std::max<std::size_t>(h, 1);
}

std::size_t WelchConfig::num_frames(std::size_t signal_len) const {
  if (signal_len < window_len) return 0;
  return (signal_len - window_len) / hop() + 1;
}

void WelchConfig::validate() const {
  if (window_len < 8) throw ArgumentError("window_len must be >= 8");
  if (window_len % 2 != 0) throw ArgumentError("window_len must be even");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ArgumentError("overlap_fraction must lie in [0, 1)");
  }
}

void WelchConfig::validate(std::size_t signal_len) const {
  validate();
  if (signal_len < window_len) {
    throw ArgumentError("signal shorter than the Welch window");
  }
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hamming) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                    static_cast<double>(i) /
                                    static_cast<double>(n));
    }
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(std::span<const double> x,
                                              const WelchConfig& cfg) {
  cfg.validate(x.size());
  const std::vector<double> w = make_window(cfg.window, cfg.window_len);
  const std::size_t frames = cfg.num_frames(x.size());
  std::vector<std::vector<double>> out(frames,
                                       std::vector<double>(cfg.window_len));
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * cfg.hop();
    for (std::size_t i = 0; i < cfg.window_len; ++i) {
      out[f][i] = x[start + i] * w[i];
    }
  }
  return out;
}

std::vector<double> welch_auto(std::span<const double> x,
                               const WelchConfig& cfg) {
  cfg.validate(x.size());
  const std::vector<double> w = make_window(cfg.window, cfg.window_len);
  const std::size_t frames = cfg.num_frames(x.size());
  std::vector<double> buf(cfg.window_len);
  std::vector<Complex> spec(cfg.num_bins());
  std::vector<double> acc(cfg.num_bins(), 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    frame_spectrum(x, f * cfg.hop(), w, buf, spec);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(spec[k]);
  }
  finish(acc, 1.0 / (window_power(w) * static_cast<double>(frames)));
  return acc;
}

std::vector<Complex> welch_cross(std::span<const double> x1,
                                 std::span<const double> x2,
                                 const WelchConfig& cfg) {
  if (x1.size() != x2.size()) {
    throw ArgumentError("welch_cross: channel lengths differ");
  }
  cfg.validate(x1.size());
  const std::vector<double> w = make_window(cfg.window, cfg.window_len);
  const std::size_t frames = cfg.num_frames(x1.size());
  std::vector<double> buf(cfg.window_len);
  std::vector<Complex> s1(cfg.num_bins());
  std::vector<Complex> s2(cfg.num_bins());
  std::vector<Complex> acc(cfg.num_bins(), Complex(0.0, 0.0));
  for (std::size_t f = 0; f < frames; ++f) {
    frame_spectrum(x1, f * cfg.hop(), w, buf, s1);
    frame_spectrum(x2, f * cfg.hop(), w, buf, s2);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      acc[k] += std::conj(s1[k]) * s2[k];
    }
  }
  const double scale = 1.0 / (window_power(w) * static_cast<double>(frames));
  for (Complex& c : acc) c *= scale;
  return acc;
}

std::vector<double> raw_coherence_sq(const SpectrumSet& s) {
  const std::size_t n = s.g12.size();
  if (s.g11.size() != n || s.g22.size() != n) {
    throw ArgumentError("coherence_sq: spectra sizes differ");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double den = s.g11[k] * s.g22[k];
    if (den > 0.0) out[k] = std::norm(s.g12[k]) / den;
  }
  return out;
}

std::vector<double> coherence_sq(const SpectrumSet& s) {
  std::vector<double> out = raw_coherence_sq(s);
  for (double& c : out) c = std::clamp(c, 0.0, 1.0 - kCoherenceEpsilon);
  return out;
}

SpectrumSet estimate_spectra(std::span<const double> x1,
                             std::span<const double> x2,
                             std::span<const double> x_mean,
                             const WelchConfig& cfg, double sample_rate_hz) {
  if (x1.size() != x2.size() || (!x_mean.empty() && x_mean.size() != x1.size())) {
    throw ArgumentError("estimate_spectra: channel lengths differ");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw ArgumentError("estimate_spectra: sample rate must be > 0");
  }
  cfg.validate(x1.size());
  const std::vector<double> w = make_window(cfg.window, cfg.window_len);
  const std::size_t frames = cfg.num_frames(x1.size());
  const std::size_t bins = cfg.num_bins();
  const bool with_mean = !x_mean.empty();

  SpectrumSet s;
  s.freq_hz.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.freq_hz[k] = sample_rate_hz * static_cast<double>(k) /
                   static_cast<double>(cfg.fft_len());
  }
  s.g11.assign(bins, 0.0);
  s.g22.assign(bins, 0.0);
  s.g12.assign(bins, Complex(0.0, 0.0));
  if (with_mean) s.p_mean.assign(bins, 0.0);

  std::vector<double> buf(cfg.window_len);
  std::vector<Complex> s1(bins);
  std::vector<Complex> s2(bins);
  std::vector<Complex> sm(bins);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * cfg.hop();
    frame_spectrum(x1, start, w, buf, s1);
    frame_spectrum(x2, start, w, buf, s2);
    for (std::size_t k = 0; k < bins; ++k) {
      s.g11[k] += std::norm(s1[k]);
      s.g22[k] += std::norm(s2[k]);
      s.g12[k] += std::conj(s1[k]) * s2[k];
    }
    if (with_mean) {
      frame_spectrum(x_mean, start, w, buf, sm);
      for (std::size_t k = 0; k < bins; ++k) s.p_mean[k] += std::norm(sm[k]);
    }
  }
  const double scale = 1.0 / (window_power(w) * static_cast<double>(frames));
  finish(s.g11, scale);
  finish(s.g22, scale);
  finish(s.p_mean, scale);
  for (Complex& c : s.g12) c *= scale;
  s.coherence_sq = coherence_sq(s);
  return s;
}

}  // namespace tdoa
