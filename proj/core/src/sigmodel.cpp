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
#include "tdoa/sigmodel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "tdoa/errors.hpp"
#include "tdoa/fft.hpp"

namespace tdoa {
namespace {

using Complex = std::complex<double>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Multiplies a one-sided spectrum of a length-n sequence by exp(-j w d).
// The ramp is advanced by complex multiplication and re-anchored with an
// exact polar value every kResync bins.
void delay_spectrum(std::span<Complex> spec, std::size_t n, double delay) {
  constexpr std::size_t kResync = 32;
  const double step = -2.0 * std::numbers::pi * delay / static_cast<double>(n);
  const Complex rot = std::polar(1.0, step);
  Complex z(1.0, 0.0);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (k % kResync == 0) z = std::polar(1.0, step * static_cast<double>(k));
    spec[k] *= z;
    z *= rot;
  }
  if (n % 2 == 0) {
    // A real input has a real Nyquist bin; keep only the real part of the
    // rotated value, which is what the c2r transform would use anyway.
    spec[n / 2] = Complex(spec[n / 2].real(), 0.0);
  }
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Two independent standard normals (Marsaglia polar method).
Complex gaussian_pair(std::mt19937_64& rng) {
  for (;;) {
    const double u = 2.0 * unit_uniform(rng) - 1.0;
    const double v = 2.0 * unit_uniform(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      return {u * f, v * f};
    }
  }
}

// Adds the DFT of n i.i.d. N(0, variance) samples to a one-sided spectrum.
// Interior bins are circular complex Gaussian with E|X|^2 = n * variance;
// DC and Nyquist are real with the same second moment.
void add_white_noise_spectrum(std::span<Complex> spec, std::size_t n,
                              double variance, std::mt19937_64& rng) {
  const double nd = static_cast<double>(n);
  const double interior = std::sqrt(nd * variance / 2.0);
  const double edge = std::sqrt(nd * variance);
  const bool even = n % 2 == 0;
  const std::size_t last_interior = even ? n / 2 - 1 : (n - 1) / 2;

  const Complex dc_pair = gaussian_pair(rng);
  spec[0] += edge * dc_pair.real();
  if (even) spec[n / 2] += edge * dc_pair.imag();
  for (std::size_t k = 1; k <= last_interior; ++k) {
    spec[k] += interior * gaussian_pair(rng);
  }
}

struct BandBins {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  std::size_t count() const { return last - first + 1; }
};

BandBins band_bins(const SourceConfig& cfg, std::size_t n) {
  const double df = cfg.sample_rate_hz / static_cast<double>(n);
  const double lo = cfg.center_hz - cfg.bandwidth_hz / 2.0;
  const double hi = cfg.center_hz + cfg.bandwidth_hz / 2.0;
  // Small tolerance so band edges that sit on a bin are included.
  const double tol = 1e-9;
  BandBins b;
  b.first = static_cast<std::size_t>(std::ceil(lo / df - tol));
  b.last = static_cast<std::size_t>(std::floor(hi / df + tol));
  if (b.first == 0) b.first = 1;
  if (b.last >= n / 2) b.last = (n - 1) / 2;
  if (b.last < b.first) {
    throw ConfigError("source band contains no DFT bin at this resolution");
  }
  return b;
}

std::vector<Complex> source_spectrum(const SourceConfig& cfg, std::size_t n,
                                     std::uint64_t seed) {
  const BandBins band = band_bins(cfg, n);
  std::mt19937_64 rng(splitmix64(seed));

  std::vector<Complex> spec(n / 2 + 1, Complex(0.0, 0.0));
  // Parseval for a one-sided spectrum without DC/Nyquist content:
  // power = 2 * sum |X_k|^2 / n^2. Unit power sets the common magnitude.
  const double mag = static_cast<double>(n) /
                     std::sqrt(2.0 * static_cast<double>(band.count()));
  for (std::size_t k = band.first; k <= band.last; ++k) {
    spec[k] = std::polar(mag, 2.0 * std::numbers::pi * unit_uniform(rng));
  }
  return spec;
}

}  // namespace

void SourceConfig::validate() const {
  if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be > 0");
  if (!(duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be > 0");
  if (!(center_hz - bandwidth_hz / 2.0 > 0.0)) {
    throw ConfigError("source band must start above 0 Hz");
  }
  if (!(center_hz + bandwidth_hz / 2.0 < sample_rate_hz / 2.0)) {
    throw ConfigError("source band must end below the Nyquist frequency");
  }
  if (!std::isfinite(snr_inband_db)) {
    throw ConfigError("snr_inband_db must be finite");
  }
  if (num_samples() < 8) throw ConfigError("recording shorter than 8 samples");
}

std::size_t SourceConfig::num_samples() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * duration_s));
}

void ArrayConfig::validate() const {
  if (num_elements < 2) throw ConfigError("num_elements must be >= 2");
  if (ref_index == other_index) throw ConfigError("pair indices must differ");
  if (ref_index < 0 || ref_index >= num_elements || other_index < 0 ||
      other_index >= num_elements) {
    throw ConfigError("pair indices must lie in [0, num_elements)");
  }
  if (!std::isfinite(pair_delay_samples)) {
    throw ConfigError("pair_delay_samples must be finite");
  }
  if (!(other_delay_low_samples <= other_delay_high_samples)) {
    throw ConfigError("other delay range must satisfy low <= high");
  }
}

std::vector<double> synth_source(const SourceConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = cfg.num_samples();
  return fft::inverse(source_spectrum(cfg, n, seed), n);
}

std::vector<double> apply_fractional_delay(std::span<const double> x,
                                           double delay_samples) {
  if (x.empty()) throw ArgumentError("apply_fractional_delay: empty input");
  if (!(std::abs(delay_samples) < static_cast<double>(x.size()) / 4.0)) {
    throw ArgumentError("apply_fractional_delay: |delay| must be < length/4");
  }
  if (delay_samples == 0.0) return {x.begin(), x.end()};
  std::vector<Complex> spec = fft::forward(x);
  delay_spectrum(spec, x.size(), delay_samples);
  return fft::inverse(spec, x.size());
}

SensorRecording synth_recording(const SourceConfig& src_cfg,
                                const ArrayConfig& arr_cfg,
                                std::uint64_t seed) {
  src_cfg.validate();
  arr_cfg.validate();
  const std::size_t n = src_cfg.num_samples();
  const auto m = static_cast<std::size_t>(arr_cfg.num_elements);
  for (double d : {arr_cfg.pair_delay_samples, arr_cfg.other_delay_low_samples,
                   arr_cfg.other_delay_high_samples}) {
    if (!(std::abs(d) < static_cast<double>(n) / 4.0)) {
      throw ArgumentError("synth_recording: delay must be < length/4");
    }
  }

  // Independent streams: source phases, element delays, one per noise channel.
  const std::vector<Complex> spec =
      source_spectrum(src_cfg, n, derive_seed(seed, {0}));
  const BandBins band = band_bins(src_cfg, n);

  SensorRecording rec;
  rec.sample_rate_hz = src_cfg.sample_rate_hz;
  rec.source = fft::inverse(spec, n);

  rec.true_delays_samples.assign(m, 0.0);
  std::mt19937_64 delay_rng(derive_seed(seed, {1}));
  const double delay_span =
      arr_cfg.other_delay_high_samples - arr_cfg.other_delay_low_samples;
  for (std::size_t k = 0; k < m; ++k) {
    const auto idx = static_cast<int>(k);
    if (idx == arr_cfg.ref_index) {
      rec.true_delays_samples[k] = 0.0;
    } else if (idx == arr_cfg.other_index) {
      rec.true_delays_samples[k] = arr_cfg.pair_delay_samples;
    } else {
      rec.true_delays_samples[k] =
          arr_cfg.other_delay_low_samples + delay_span * unit_uniform(delay_rng);
    }
  }

  // Signal PSD is measured on the synthesized spectrum: total power spread
  // over the occupied bins. Noise variance sigma^2 spreads over fs/2.
  double signal_power = 0.0;
  for (const Complex& c : spec) signal_power += std::norm(c);
  signal_power *= 2.0 / (static_cast<double>(n) * static_cast<double>(n));
  const double df = src_cfg.sample_rate_hz / static_cast<double>(n);
  const double signal_psd = signal_power / (static_cast<double>(band.count()) * df);
  const double eta = std::pow(10.0, src_cfg.snr_inband_db / 10.0);
  const double noise_var = signal_psd / eta * (src_cfg.sample_rate_hz / 2.0);

  rec.channels.resize(m);
  std::vector<Complex> work(spec.size());
  for (std::size_t k = 0; k < m; ++k) {
    std::copy(spec.begin(), spec.end(), work.begin());
    delay_spectrum(work, n, rec.true_delays_samples[k]);
    std::mt19937_64 noise_rng(derive_seed(seed, {2, k}));
    add_white_noise_spectrum(work, n, noise_var, noise_rng);
    rec.channels[k] = fft::inverse(work, n);
  }
  return rec;
}

double snr_inband_to_broadband(double snr_in_db, const SourceConfig& cfg) {
  return snr_in_db +
         10.0 * std::log10(cfg.bandwidth_hz / (cfg.sample_rate_hz / 2.0));
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace tdoa
