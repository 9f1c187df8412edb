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

// Synthetic array recordings: a random-phase, rectangular-spectrum
// narrowband source received by M sensors with per-element delays and
// independent white Gaussian noise.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace tdoa {

struct SourceConfig {
  double sample_rate_hz = 48000.0;
  double duration_s = 0.1;
  double center_hz = 1000.0;
  double bandwidth_hz = 300.0;
  // In-band signal-to-noise PSD ratio in dB.
  double snr_inband_db = 0.0;

  // Throws ConfigError.
  void validate() const;
  // round(sample_rate_hz * duration_s)
  std::size_t num_samples() const;
};

struct ArrayConfig {
  int num_elements = 16;
  // Evaluated pair (i, j). Sensor i is the delay reference.
  int ref_index = 0;
  int other_index = 1;
  double pair_delay_samples = 5.0;
  // Delays of the remaining M-2 elements are drawn uniformly from this range.
  double other_delay_low_samples = 0.0;
  double other_delay_high_samples = 5.0;

  // Throws ConfigError.
  void validate() const;
};

struct SensorRecording {
  std::vector<std::vector<double>> channels;
  std::vector<double> true_delays_samples;
  // Noise-free source, kept for tests.
  std::vector<double> source;
  double sample_rate_hz = 0.0;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t length() const {
    return channels.empty() ? 0 : channels.front().size();
  }
};

// Unit-power real sequence of length cfg.num_samples() whose DFT has
// constant magnitude and independent uniform phase on every bin inside
// [center - bw/2, center + bw/2] and is exactly zero elsewhere.
std::vector<double> synth_source(const SourceConfig& cfg, std::uint64_t seed);

// Circular delay by a linear phase ramp in the frequency domain. Integer
// delays are exact circular shifts. For fractional delays the (even-length)
// Nyquist bin is scaled by cos(pi * delay), so delays compose exactly only
// for sequences without Nyquist content. Requires |delay| < size/4.
std::vector<double> apply_fractional_delay(std::span<const double> x,
                                           double delay_samples);

// Sensor ref_index gets delay 0, other_index gets pair_delay_samples, the
// rest get independent uniform delays. Each channel gets independent white
// Gaussian noise whose PSD makes the in-band PSD ratio equal to
// 10^(snr_inband_db / 10).
SensorRecording synth_recording(const SourceConfig& src_cfg,
                                const ArrayConfig& arr_cfg,
                                std::uint64_t seed);

// Broadband SNR for a flat in-band signal in full-band white noise:
// snr_in_db + 10 log10(bw / (fs / 2)).
double snr_inband_to_broadband(double snr_in_db, const SourceConfig& cfg);

// Mixes several integers into one 64-bit seed (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace tdoa
