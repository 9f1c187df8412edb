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

// Cramer-Rao lower bound on delay estimation variance.

#include <span>

namespace tdoa {

struct CrlbInput {
  double snr_inband_db = 0.0;
  double duration_s = 0.1;
  double center_hz = 1000.0;
  double bandwidth_hz = 300.0;
};

struct CrlbResult {
  double eta_in = 0.0;          // linear in-band SNR
  double coherence_term = 0.0;  // eta^2 / (1 + 2 eta)
  double integral_w2 = 0.0;     // integral of (2 pi f)^2 over the band
  double variance_s2 = 0.0;
  double std_s = 0.0;
};

// Closed form for a rectangular signal spectrum with constant in-band SNR:
//   var = 1 / (2 T C I),  C = eta^2 / (1 + 2 eta),
//   I = (2 pi)^2 ((fc + bw/2)^3 - (fc - bw/2)^3) / 3.
// Throws ArgumentError on non-positive duration or bandwidth, or a band
// reaching below 0 Hz.
CrlbResult crlb(const CrlbInput& input);

// General form: trapezoidal integration of (2 pi f)^2 g / (1 - g) over the
// given grid, g = |gamma|^2. Returns the standard deviation in seconds.
// Throws ArgumentError if any g lies outside [0, 1), the grid is malformed,
// or the integral is zero (no information).
double crlb_general(std::span<const double> coherence_sq,
                    std::span<const double> freq_hz, double duration_s);

// |gamma|^2 for an in-band SNR eta: eta^2 / (1 + eta)^2.
double coherence_from_snr(double eta);

}  // namespace tdoa
