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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "support/oracles.hpp"
#include "tdoa/errors.hpp"
#include "tdoa/gcc.hpp"
#include "tdoa/sigmodel.hpp"
#include "tdoa/spectral.hpp"

using namespace tdoa;
using tdoa::testing::max_abs_diff;
using tdoa::testing::white_noise;

namespace {

constexpr double kFs = 48000.0;

// Grid-aligned tones: every component sits on a 480-point bin.
std::vector<double> tone_grid() {
  std::vector<double> f;
  for (double v = 500.0; v <= 3000.0; v += 100.0) f.push_back(v);
  return f;
}

// Noiseless M-channel recording: channel 0 undelayed, channel 1 delayed by d,
// the rest by seeded uniform delays in [0, 5].
SensorRecording noiseless(const std::vector<double>& s, double d, int m,
                          std::uint64_t seed) {
  SensorRecording rec;
  rec.sample_rate_hz = kFs;
  rec.source = s;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int k = 0; k < m; ++k) {
    const double dk = k == 0 ? 0.0 : k == 1 ? d : u(gen);
    rec.channels.push_back(dk == 0.0 ? s : apply_fractional_delay(s, dk));
    rec.true_delays_samples.push_back(dk);
  }
  return rec;
}

double est_samples(const SensorRecording& rec, Method m) {
  return estimate_pair(rec, m, WelchConfig{}, 0.005).delay_s * kFs;
}

SpectrumSet random_spectra(std::mt19937_64& gen, std::size_t bins, bool with_zeros) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  SpectrumSet s;
  for (std::size_t k = 0; k < bins; ++k) {
    s.freq_hz.push_back(static_cast<double>(k));
    const double a = e(gen) * 1e3;
    const double b = e(gen) * 1e-2;
    const double coh = u(gen);
    const double ph = 2 * std::numbers::pi * u(gen);
    const bool zero = with_zeros && k % 7 == 3;
    s.g11.push_back(zero ? 0.0 : a);
    s.g22.push_back(zero ? 0.0 : b);
    s.g12.push_back(zero ? std::complex<double>{} : std::polar(std::sqrt(coh * a * b), ph));
    s.p_mean.push_back(zero ? 0.0 : a * 2.0 * u(gen));
  }
  s.coherence_sq = coherence_sq(s);
  return s;
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK(to_string(Method::msif) == "msif");
  CHECK(parse_method("MSIF") == Method::msif);
  CHECK_FALSE(parse_method("roth").has_value());
}

TEST_CASE("mean_signal") {
  const auto x = white_noise(100, 1.0, 1);
  const std::vector<std::vector<double>> same(3, x);
  CHECK(mean_signal(same) == x);

  std::vector<double> neg(x);
  for (double& v : neg) v = -v;
  for (double v : mean_signal(std::vector<std::vector<double>>{x, neg})) CHECK(v == 0.0);

  for (int m : {2, 4, 16}) {
    double p = 0.0;
    for (int r = 0; r < 100; ++r) {
      std::vector<std::vector<double>> ch;
      for (int k = 0; k < m; ++k) ch.push_back(white_noise(480, 1.0, r * 100 + k));
      for (double v : mean_signal(ch)) p += v * v;
    }
    p /= 100.0 * 480.0;
    CHECK(p == doctest::Approx(1.0 / m).epsilon(0.1));
  }

  CHECK_THROWS_AS(mean_signal(std::vector<std::vector<double>>{}), ArgumentError);
  CHECK_THROWS_AS(mean_signal(std::vector<std::vector<double>>{{1, 2}, {1}}), ArgumentError);
  SensorRecording empty;
  CHECK_THROWS_AS(mean_signal(empty), ArgumentError);
}

TEST_CASE("weight formulas on hand-built bins") {
  SpectrumSet s;
  s.freq_hz = {0, 1, 2};
  s.g11 = {1.0, 4.0, 1.0};
  s.g22 = {4.0, 1.0, 1.0};
  s.g12 = {{2, 0}, {0, 1}, {0.6, 0.8}};
  s.p_mean = {4.0, 1.0, 0.25};
  s.coherence_sq = {0.5, 0.25, 0.5};

  for (double v : compute_weight(Method::cc, s).values) CHECK(v == 1.0);

  const auto scot = compute_weight(Method::scot, s).values;
  CHECK(scot[0] == doctest::Approx(0.5));
  CHECK(scot[2] == doctest::Approx(1.0));

  const auto phat = compute_weight(Method::phat, s).values;
  CHECK(phat[0] == doctest::Approx(0.5));
  CHECK(phat[1] == doctest::Approx(1.0));

  const auto ml = compute_weight(Method::ml, s).values;
  CHECK(ml[2] == doctest::Approx(1.0));                // 0.5 / (1 - 0.5), |g12| = 1
  CHECK(ml[1] == doctest::Approx(1.0 / 3.0));          // 0.25 / 0.75

  const auto msif = compute_weight(Method::msif, s).values;
  CHECK(msif[0] == 1.0);   // p_mean = 4 g11, clipped
  CHECK(msif[1] == doctest::Approx(0.25));
  CHECK(msif[2] == doctest::Approx(0.25));
  CHECK(compute_weight(Method::msif, s).method == Method::msif);
}

TEST_CASE("ML computes coherence when it is absent") {
  SpectrumSet s;
  s.freq_hz = {0, 1};
  s.g11 = {1.0, 2.0};
  s.g22 = {2.0, 2.0};
  s.g12 = {{1, 0}, {1, 1}};
  const auto w = compute_weight(Method::ml, s).values;  // coherence 0.5 at both
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("weights need their spectra") {
  SpectrumSet s;
  s.freq_hz = {0, 1};
  s.g12 = {{1, 0}, {1, 0}};
  CHECK_NOTHROW(compute_weight(Method::cc, s));
  CHECK_NOTHROW(compute_weight(Method::phat, s));
  CHECK_THROWS_AS(compute_weight(Method::scot, s), ArgumentError);
  CHECK_THROWS_AS(compute_weight(Method::ml, s), ArgumentError);
  s.g11 = {1, 1};
  CHECK_THROWS_AS(compute_weight(Method::msif, s), ArgumentError);
  SpectrumSet empty;
  CHECK_THROWS_AS(compute_weight(Method::cc, empty), ArgumentError);
}

TEST_CASE("weights are finite, non-negative, MSIF bounded, PHAT whitens") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_spectra(gen, 65, trial % 2 == 0);
    for (Method m : kAllMethods) {
      const auto w = compute_weight(m, s).values;
      REQUIRE(w.size() == 65);
      for (double v : w) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        if (m == Method::msif) CHECK(v <= 1.0);
      }
    }
    const auto w = compute_weight(Method::phat, s).values;
    double mx = 0.0;
    for (const auto& g : s.g12) mx = std::max(mx, std::abs(g));
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (std::abs(s.g12[k]) > kDenominatorGuard * mx) {
        CHECK(w[k] * std::abs(s.g12[k]) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
  // An all-zero spectrum yields zero weights rather than infinities.
  SpectrumSet z;
  z.freq_hz = {0, 1, 2};
  z.g11 = z.g22 = z.p_mean = {0, 0, 0};
  z.g12 = {{}, {}, {}};
  z.coherence_sq = {0, 0, 0};
  for (Method m : {Method::scot, Method::phat, Method::ml, Method::msif}) {
    for (double v : compute_weight(m, z).values) CHECK(v == 0.0);
  }
}

TEST_CASE("weighted correlation layout") {
  const auto s = estimate_spectra(white_noise(4800, 1, 1), white_noise(4800, 1, 2), {},
                                  WelchConfig{}, kFs);
  const auto r = weighted_correlation(s.g12, compute_weight(Method::cc, s), kFs);
  REQUIRE(r.values.size() == 480);
  REQUIRE(r.lag_axis_s.size() == 480);
  CHECK(r.zero_lag_index() == 240);
  CHECK(r.lag_axis_s.front() == doctest::Approx(-240.0 / kFs));
  CHECK(r.lag_axis_s[240] == 0.0);
  CHECK(r.lag_axis_s.back() == doctest::Approx(239.0 / kFs));
  CHECK(r.sample_rate_hz == kFs);

  WeightSpectrum zero{std::vector<double>(241, 0.0), Method::cc};
  for (double v : weighted_correlation(s.g12, zero, kFs).values) CHECK(v == 0.0);

  WeightSpectrum wrong{std::vector<double>(240, 1.0), Method::cc};
  CHECK_THROWS_AS(weighted_correlation(s.g12, wrong, kFs), ArgumentError);
}

TEST_CASE("plain correlation of a delayed pair peaks at the delay") {
  const auto x = synth_source(SourceConfig{}, 12);
  const auto y = apply_fractional_delay(x, 5.0);
  const auto s = estimate_spectra(x, y, {}, WelchConfig{}, kFs);
  const auto r = weighted_correlation(s.g12, compute_weight(Method::cc, s), kFs);
  const auto it = std::max_element(r.values.begin(), r.values.end());
  CHECK(it - r.values.begin() - r.zero_lag_index() == 5);
}

TEST_CASE("CC correlation equals the time-domain frame-averaged oracle") {
  std::mt19937_64 gen(64);
  std::uniform_real_distribution<double> ov(0.0, 0.9);
  std::uniform_int_distribution<int> extra(0, 200);
  for (int trial = 0; trial < 50; ++trial) {
    WelchConfig cfg;
    cfg.window_len = 64;
    cfg.overlap_fraction = ov(gen);
    cfg.window = trial % 3 == 0 ? WindowKind::rectangular : WindowKind::hamming;
    const std::size_t n = 64 + static_cast<std::size_t>(extra(gen));
    const auto x1 = white_noise(n, 1.0, gen());
    const auto x2 = white_noise(n, 1.0, gen());
    const auto s = estimate_spectra(x1, x2, {}, cfg, kFs);
    const auto r = weighted_correlation(s.g12, compute_weight(Method::cc, s), kFs);
    const auto ref = tdoa::testing::brute_force_frame_correlation(
        x1, x2, make_window(cfg.window, 64), cfg.hop());
    double peak = 0.0;
    for (double v : ref) peak = std::max(peak, std::abs(v));
    CHECK(max_abs_diff(r.values, ref) <= 1e-6 * peak);
  }
}

TEST_CASE("hilbert_shift quadrature and involution") {
  const std::size_t n = 480;
  std::vector<double> c(n), s(n);
  for (std::size_t t = 0; t < n; ++t) {
    c[t] = std::cos(2 * std::numbers::pi * 13.0 * t / n);
    s[t] = std::sin(2 * std::numbers::pi * 13.0 * t / n);
  }
  CHECK(max_abs_diff(hilbert_shift(c), s) <= 1e-9);

  std::mt19937_64 gen(3);
  for (std::size_t len : {64u, 480u, 101u}) {
    auto x = white_noise(len, 1.0, gen());
    // Remove DC and (for even lengths) Nyquist so H^2 = -1 holds exactly.
    double dc = 0.0, ny = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      dc += x[t];
      ny += (t % 2 ? -1.0 : 1.0) * x[t];
    }
    dc /= static_cast<double>(len);
    ny /= static_cast<double>(len);
    for (std::size_t t = 0; t < len; ++t) {
      x[t] -= dc;
      if (len % 2 == 0) x[t] -= (t % 2 ? -1.0 : 1.0) * ny;
    }
    auto neg = x;
    for (double& v : neg) v = -v;
    CHECK(max_abs_diff(hilbert_shift(hilbert_shift(x)), neg) <= 1e-9);
  }

  // A constant and an alternating sequence are annihilated.
  std::vector<double> alt(16);
  for (std::size_t t = 0; t < 16; ++t) alt[t] = t % 2 ? -1.0 : 1.0;
  for (double v : hilbert_shift(alt)) CHECK(std::abs(v) < 1e-15);
  for (double v : hilbert_shift(std::vector<double>(16, 2.0))) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("hilbert_shift output is orthogonal to band-limited input") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = synth_source(SourceConfig{}, seed);
    const auto h = hilbert_shift(x);
    double dot = 0.0, norm = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      dot += x[t] * h[t];
      norm += x[t] * x[t];
    }
    CHECK(std::abs(dot) <= 1e-6 * norm);
  }
}

namespace {

// Band-limited correlation: unit-magnitude bins 5..60 with linear phase for a
// peak at `lag` samples.
CorrelationFunction synthetic_correlation(double lag) {
  std::vector<std::complex<double>> g(241);
  for (std::size_t k = 5; k <= 60; ++k) {
    g[k] = std::polar(1.0, -2 * std::numbers::pi * k * lag / 480.0);
  }
  return weighted_correlation(g, WeightSpectrum{std::vector<double>(241, 1.0)}, kFs);
}

}  // namespace

TEST_CASE("estimate_delay on synthetic correlations") {
  const auto at5 = estimate_delay(synthetic_correlation(5.0), 0.005);
  CHECK(at5.refined);
  CHECK(at5.coarse_lag_samples == 5);
  CHECK(at5.delay_s * kFs == doctest::Approx(5.0).epsilon(0.02 / 5.0));
  CHECK(std::abs(at5.delay_s - 1.0417e-4) < 0.02 / kFs);

  const auto at0 = estimate_delay(synthetic_correlation(0.0), 0.005);
  CHECK(std::abs(at0.delay_s * kFs) <= 1e-3);

  for (double lag : {-3.3, 0.5, 7.75, 100.2}) {
    const auto e = estimate_delay(synthetic_correlation(lag), 0.005);
    CHECK(std::abs(e.delay_s * kFs - lag) <= 0.02);
  }
}

TEST_CASE("estimate_delay search window and errors") {
  // Strong peak at 100 samples, weaker one at 5: a 10-sample window sees 5.
  auto r = synthetic_correlation(100.0);
  const auto weak = synthetic_correlation(5.0);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += 0.5 * weak.values[i];
  CHECK(estimate_delay(r, 0.005).coarse_lag_samples == 100);
  CHECK(estimate_delay(r, 10.0 / kFs).coarse_lag_samples == 5);

  CHECK(estimate_delay(r, 0.0).coarse_lag_samples == 0);
  CHECK_THROWS_AS(estimate_delay(r, -1e-3), ArgumentError);
  CHECK_THROWS_AS(estimate_delay(r, std::numeric_limits<double>::quiet_NaN()), ArgumentError);
  CHECK_THROWS_AS(estimate_delay(r, 241.0 / kFs), ArgumentError);
  CHECK_NOTHROW(estimate_delay(r, 240.0 / kFs));

  CorrelationFunction flat;
  flat.values.assign(480, 0.0);
  flat.lag_axis_s.assign(480, 0.0);
  flat.sample_rate_hz = kFs;
  const auto e = estimate_delay(flat, 0.001);
  CHECK(e.coarse_lag_samples == -48);  // first maximum of a flat window
  CHECK(e.delay_s == e.coarse_lag_samples / kFs);
}

TEST_CASE("noiseless fractional delay of 5.25 samples") {
  const auto x = synth_source(SourceConfig{}, 21);
  SensorRecording rec;
  rec.sample_rate_hz = kFs;
  rec.channels = {x, apply_fractional_delay(x, 5.25)};
  const auto s = estimate_spectra(rec.channels[0], rec.channels[1], {}, WelchConfig{}, kFs);
  const auto w = compute_weight(Method::cc, s);
  const double oracle = tdoa::testing::dense_argmax_delay(s.g12, w.values, 64, 240);
  const double est = est_samples(rec, Method::cc);
  CHECK(std::abs(est - 5.25) <= 0.05);
  CHECK(std::abs(oracle - 5.25) <= 0.05);
  CHECK(std::abs(est - oracle) <= 0.05);
}

TEST_CASE("estimate_pair: noiseless MSIF at 5 samples") {
  const auto rec = noiseless(synth_source(SourceConfig{}, 5), 5.0, 16, 6);
  CHECK(std::abs(est_samples(rec, Method::msif) - 5.0) <= 0.05);
  CHECK(std::abs(est_samples(rec, Method::msif) * 1e6 / kFs - 104.1667) <= 0.05e6 / kFs);
}

TEST_CASE("estimate_pair: CC and MSIF agree at high SNR") {
  SourceConfig src;
  src.snr_inband_db = 20;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rec = synth_recording(src, ArrayConfig{}, seed);
    CHECK(std::abs(est_samples(rec, Method::cc) - est_samples(rec, Method::msif)) <= 0.1);
  }
}

TEST_CASE("estimate_pair is scale invariant for every method") {
  for (double snr : {20.0, 5.0, -5.0}) {
    SourceConfig src;
    src.snr_inband_db = snr;
    const auto rec = synth_recording(src, ArrayConfig{}, 31);
    for (double c : {10.0, 0.37}) {
      SensorRecording scaled = rec;
      for (auto& ch : scaled.channels) {
        for (double& v : ch) v *= c;
      }
      for (Method m : kAllMethods) {
        const auto a = estimate_pair(rec, m, WelchConfig{}, 0.005);
        const auto b = estimate_pair(scaled, m, WelchConfig{}, 0.005);
        CHECK(a.coarse_lag_samples == b.coarse_lag_samples);
        CHECK(a.refined == b.refined);
        CHECK(std::abs(a.delay_s - b.delay_s) <= 1e-12);
      }
    }
  }
}

TEST_CASE("MSIF reduces to CC when every channel is the same signal") {
  const auto x = white_noise(4800, 1.0, 77);
  SensorRecording rec;
  rec.sample_rate_hz = kFs;
  rec.channels.assign(4, x);
  const auto mean = mean_signal(rec);
  REQUIRE(mean == x);
  const auto s = estimate_spectra(rec.channels[0], rec.channels[1], mean, WelchConfig{}, kFs);
  for (double v : compute_weight(Method::msif, s).values) CHECK(v == 1.0);
  const auto r_cc = weighted_correlation(s.g12, compute_weight(Method::cc, s), kFs);
  const auto r_msif = weighted_correlation(s.g12, compute_weight(Method::msif, s), kFs);
  CHECK(r_cc.values == r_msif.values);
  const auto a = estimate_pair(rec, Method::cc, WelchConfig{}, 0.005);
  const auto b = estimate_pair(rec, Method::msif, WelchConfig{}, 0.005);
  CHECK(a.delay_s == b.delay_s);
}

TEST_CASE("duplicated channels give zero delay for every method") {
  const auto x = synth_source(SourceConfig{}, 9);
  SensorRecording rec;
  rec.sample_rate_hz = kFs;
  rec.channels = {x, x};
  for (Method m : kAllMethods) CHECK(std::abs(est_samples(rec, m)) <= 1e-3);
}

TEST_CASE("shift equivariance on a grid-aligned multitone") {
  const auto s = tdoa::testing::multitone(4800, kFs, tone_grid(), 5);
  const auto base = noiseless(s, 5.0, 8, 1);
  for (Method m : kAllMethods) {
    const double d0 = est_samples(base, m);
    for (double delta = -2.0; delta <= 2.0; delta += 0.5) {
      auto shifted = base;
      shifted.channels[1] = apply_fractional_delay(s, 5.0 + delta);
      const std::string name(to_string(m));
      CAPTURE(name);
      CAPTURE(delta);
      CHECK(std::abs(est_samples(shifted, m) - d0 - delta) <= 0.05);
    }
  }
}

TEST_CASE("shift equivariance on the narrowband source for CC, ML and MSIF") {
  const auto s = synth_source(SourceConfig{}, 14);
  const auto base = noiseless(s, 5.0, 16, 2);
  for (Method m : {Method::cc, Method::ml, Method::msif}) {
    const double d0 = est_samples(base, m);
    for (double delta = -2.0; delta <= 2.0; delta += 0.25) {
      auto shifted = base;
      shifted.channels[1] = apply_fractional_delay(s, 5.0 + delta);
      const std::string name(to_string(m));
      CAPTURE(name);
      CAPTURE(delta);
      CHECK(std::abs(est_samples(shifted, m) - d0 - delta) <= 0.05);
    }
  }
}

TEST_CASE("multi-method estimate matches single-method calls") {
  SourceConfig src;
  src.snr_inband_db = 3;
  const auto rec = synth_recording(src, ArrayConfig{}, 8);
  const auto all = estimate_pair(rec, std::span<const Method>(kAllMethods), WelchConfig{}, 0.005);
  REQUIRE(all.size() == kAllMethods.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto one = estimate_pair(rec, kAllMethods[i], WelchConfig{}, 0.005);
    CHECK(all[i].delay_s == one.delay_s);
    CHECK(all[i].coarse_lag_samples == one.coarse_lag_samples);
  }
}

TEST_CASE("estimate_pair pair selection and errors") {
  const auto s = synth_source(SourceConfig{}, 3);
  auto rec = noiseless(s, 5.0, 3, 4);
  rec.channels[2] = apply_fractional_delay(s, -2.0);
  const auto e = estimate_pair(rec, Method::cc, WelchConfig{}, 0.005, {2, 1});
  CHECK(std::abs(e.delay_s * kFs - 7.0) <= 0.05);
  const auto back = estimate_pair(rec, Method::cc, WelchConfig{}, 0.005, {1, 0});
  CHECK(std::abs(back.delay_s * kFs + 5.0) <= 0.05);

  CHECK_THROWS_AS(estimate_pair(rec, Method::cc, WelchConfig{}, 0.005, {0, 3}), ArgumentError);
  CHECK_THROWS_AS(estimate_pair(rec, Method::cc, WelchConfig{}, 0.005, {1, 1}), ArgumentError);
  SensorRecording one;
  one.sample_rate_hz = kFs;
  one.channels = {s};
  CHECK_THROWS_AS(estimate_pair(one, Method::cc, WelchConfig{}, 0.005), ArgumentError);
}

TEST_CASE("default max lag is half the window") {
  CHECK(default_max_lag_s(WelchConfig{}, kFs) == doctest::Approx(0.005));
}
