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
#include <cctype>
#include "tdoa/gcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdoa/errors.hpp"
#include "tdoa/fft.hpp"

namespace tdoa {
namespace {

using Complex = std::complex<double>;

double guard_for(std::span<const double> den) {
  double mx = 0.0;
  for (double d : den) mx = std::max(mx, d);
  return kDenominatorGuard * mx;
}

// Floors the denominator at the guard; zero only when the whole spectrum is.
double safe_inverse(double den, double eps) {
  const double d = std::max(den, eps);
  return d > 0.0 ? 1.0 / d : 0.0;
}

void require(bool ok, const char* what) {
  if (!ok) throw ArgumentError(what);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::cc: return "cc";
    case Method::scot: return "scot";
    case Method::phat: return "phat";
    case Method::ml: return "ml";
    case Method::msif: return "msif";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (Method m : kAllMethods) {
    if (to_string(m) == lower) return m;
  }
  return std::nullopt;
}

std::vector<double> mean_signal(std::span<const std::vector<double>> channels) {
  if (channels.empty()) throw ArgumentError("mean_signal: no channels");
  const std::size_t n = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw ArgumentError("mean_signal: ragged channels");
  }
  // Running mean: identical channels reproduce the channel bit for bit.
  std::vector<double> out(channels.front());
  for (std::size_t k = 1; k < channels.size(); ++k) {
    const double inv = 1.0 / static_cast<double>(k + 1);
    const auto& ch = channels[k];
    for (std::size_t i = 0; i < n; ++i) out[i] += (ch[i] - out[i]) * inv;
  }
  return out;
}

std::vector<double> mean_signal(const SensorRecording& rec) {
  return mean_signal(std::span<const std::vector<double>>(rec.channels));
}

WeightSpectrum compute_weight(Method method, const SpectrumSet& s) {
  const std::size_t bins = s.g12.size();
  require(bins > 0, "compute_weight: empty cross spectrum");
  WeightSpectrum w;
  w.method = method;
  w.values.assign(bins, 1.0);

  switch (method) {
    case Method::cc:
      break;

    case Method::scot: {
      require(s.g11.size() == bins && s.g22.size() == bins,
              "compute_weight(scot): g11 and g22 required");
      std::vector<double> den(bins);
      for (std::size_t k = 0; k < bins; ++k) den[k] = std::sqrt(s.g11[k] * s.g22[k]);
      const double eps = guard_for(den);
      for (std::size_t k = 0; k < bins; ++k) w.values[k] = safe_inverse(den[k], eps);
      break;
    }

    case Method::phat: {
      std::vector<double> mag(bins);
      for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(s.g12[k]);
      const double eps = guard_for(mag);
      for (std::size_t k = 0; k < bins; ++k) w.values[k] = safe_inverse(mag[k], eps);
      break;
    }

    case Method::ml: {
      std::vector<double> coh = s.coherence_sq;
      if (coh.empty()) {
        require(s.g11.size() == bins && s.g22.size() == bins,
                "compute_weight(ml): coherence or g11/g22 required");
        coh = coherence_sq(s);
      }
      require(coh.size() == bins, "compute_weight(ml): coherence size mismatch");
      std::vector<double> mag(bins);
      for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(s.g12[k]);
      const double eps = guard_for(mag);
      for (std::size_t k = 0; k < bins; ++k) {
        const double c = std::clamp(coh[k], 0.0, 1.0 - kCoherenceEpsilon);
        w.values[k] = safe_inverse(mag[k], eps) * c / (1.0 - c);
      }
      break;
    }

    case Method::msif: {
      require(s.p_mean.size() == bins && s.g11.size() == bins,
              "compute_weight(msif): p_mean and g11 required");
      const double eps = guard_for(s.g11);
      for (std::size_t k = 0; k < bins; ++k) {
        const double den = std::max(s.g11[k], eps);
        // |H|^2 clipped to 1; a silent bin carries no weight.
        w.values[k] = den > 0.0 ? std::min(s.p_mean[k] / den, 1.0) : 0.0;
      }
      break;
    }
  }
  return w;
}

CorrelationFunction weighted_correlation(std::span<const Complex> g12,
                                         const WeightSpectrum& w,
                                         double sample_rate_hz) {
  require(g12.size() >= 2, "weighted_correlation: need at least 2 bins");
  require(w.values.size() == g12.size(),
          "weighted_correlation: weight and cross spectrum grids differ");
  require(sample_rate_hz > 0.0, "weighted_correlation: sample rate must be > 0");

  const std::size_t n = 2 * (g12.size() - 1);
  std::vector<Complex> prod(g12.size());
  for (std::size_t k = 0; k < g12.size(); ++k) prod[k] = w.values[k] * g12[k];
  const std::vector<double> circ = fft::inverse(prod, n);

  CorrelationFunction r;
  r.sample_rate_hz = sample_rate_hz;
  r.values.resize(n);
  r.lag_axis_s.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    // Index i holds lag i - n/2, i.e. circular index (i + n/2) mod n.
    r.values[i] = circ[(i + half) % n];
    r.lag_axis_s[i] =
        (static_cast<double>(i) - static_cast<double>(half)) / sample_rate_hz;
  }
  return r;
}

std::vector<double> hilbert_shift(std::span<const double> r) {
  require(!r.empty(), "hilbert_shift: empty input");
  const std::size_t n = r.size();
  std::vector<Complex> spec = fft::forward(r);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    spec[k] *= Complex(0.0, -1.0);
  }
  if (n % 2 == 0) spec.back() = 0.0;
  return fft::inverse(spec, n);
}

DelayEstimate estimate_delay(const CorrelationFunction& r, double max_lag_s) {
  const auto n = static_cast<std::ptrdiff_t>(r.values.size());
  require(n >= 2, "estimate_delay: correlation too short");
  require(r.sample_rate_hz > 0.0, "estimate_delay: sample rate must be > 0");
  require(std::isfinite(max_lag_s) && max_lag_s >= 0.0,
          "estimate_delay: empty search window");
  const std::ptrdiff_t zero = r.zero_lag_index();
  const double max_lag_samples = max_lag_s * r.sample_rate_hz;
  require(max_lag_samples <= static_cast<double>(zero) + 1e-9,
          "estimate_delay: max_lag_s exceeds the lag axis");
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(max_lag_samples + 1e-9));

  const std::ptrdiff_t lo = zero - reach;
  const std::ptrdiff_t hi = std::min(zero + reach, n - 1);
  std::ptrdiff_t peak = lo;
  for (std::ptrdiff_t i = lo + 1; i <= hi; ++i) {
    if (r.values[static_cast<std::size_t>(i)] > r.values[static_cast<std::size_t>(peak)]) {
      peak = i;
    }
  }

  DelayEstimate est;
  est.coarse_lag_samples = static_cast<long>(peak - zero);
  est.delay_s = static_cast<double>(est.coarse_lag_samples) / r.sample_rate_hz;

  const std::vector<double> h = hilbert_shift(r.values);
  auto val = [&](std::ptrdiff_t i) { return r.values[static_cast<std::size_t>(i)]; };
  auto hil = [&](std::ptrdiff_t i) { return h[static_cast<std::size_t>(i)]; };

  // Main lobe: the run of positive correlation around the peak, inside the
  // search window.
  std::ptrdiff_t left = peak;
  std::ptrdiff_t right = peak;
  if (val(peak) > 0.0) {
    while (left > lo && val(left - 1) > 0.0) --left;
    while (right < hi && val(right + 1) > 0.0) ++right;
  }
  // Always allow the two intervals adjacent to the peak.
  left = std::max<std::ptrdiff_t>(std::min(left, peak - 1), 0);
  right = std::min(std::max(right, peak + 1), n - 1);

  std::optional<double> best;
  auto consider = [&](double pos) {
    if (!best || std::abs(pos - static_cast<double>(peak)) <
                     std::abs(*best - static_cast<double>(peak))) {
      best = pos;
    }
  };
  for (std::ptrdiff_t a = left; a < right; ++a) {
    const double ha = hil(a);
    const double hb = hil(a + 1);
    if (ha == 0.0) {
      consider(static_cast<double>(a));
    } else if ((ha < 0.0 && hb >= 0.0) || (ha > 0.0 && hb <= 0.0)) {
      consider(static_cast<double>(a) + ha / (ha - hb));
    }
  }
  if (hil(right) == 0.0) consider(static_cast<double>(right));
  if (best) {
    est.refined = true;
    est.delay_s = (*best - static_cast<double>(zero)) / r.sample_rate_hz;
  }
  return est;
}

DelayEstimate estimate_from_spectra(const SpectrumSet& s, Method method,
                                    double sample_rate_hz, double max_lag_s) {
  const WeightSpectrum w = compute_weight(method, s);
  return estimate_delay(weighted_correlation(s.g12, w, sample_rate_hz), max_lag_s);
}

std::vector<DelayEstimate> estimate_pair(const SensorRecording& rec,
                                         std::span<const Method> methods,
                                         const WelchConfig& wcfg,
                                         double max_lag_s, SensorPair pair) {
  require(rec.num_channels() >= 2, "estimate_pair: need at least 2 channels");
  require(pair.ref != pair.other, "estimate_pair: pair indices must differ");
  require(pair.ref < rec.num_channels() && pair.other < rec.num_channels(),
          "estimate_pair: pair index out of range");
  for (const auto& ch : rec.channels) {
    require(ch.size() == rec.length(), "estimate_pair: ragged channels");
  }

  const bool need_mean =
      std::find(methods.begin(), methods.end(), Method::msif) != methods.end();
  const std::vector<double> mean =
      need_mean ? mean_signal(rec) : std::vector<double>{};
  const SpectrumSet s = estimate_spectra(rec.channels[pair.ref],
                                         rec.channels[pair.other], mean, wcfg,
                                         rec.sample_rate_hz);
  std::vector<DelayEstimate> out;
  out.reserve(methods.size());
  for (Method m : methods) {
    out.push_back(estimate_from_spectra(s, m, rec.sample_rate_hz, max_lag_s));
  }
  return out;
}

DelayEstimate estimate_pair(const SensorRecording& rec, Method method,
                            const WelchConfig& wcfg, double max_lag_s,
                            SensorPair pair) {
  const Method one[] = {method};
  return estimate_pair(rec, one, wcfg, max_lag_s, pair).front();
}

double default_max_lag_s(const WelchConfig& wcfg, double sample_rate_hz) {
  return static_cast<double>(wcfg.window_len / 2) / sample_rate_hz;
}

}  // namespace tdoa
