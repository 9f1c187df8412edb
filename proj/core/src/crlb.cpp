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
#include "tdoa/crlb.hpp"

#include <cmath>
#include <numbers>

#include "tdoa/errors.hpp"

namespace tdoa {

CrlbResult crlb(const CrlbInput& in) {
  if (!(in.duration_s > 0.0)) throw ArgumentError("crlb: duration must be > 0");
  if (!(in.bandwidth_hz > 0.0)) throw ArgumentError("crlb: bandwidth must be > 0");
  if (!(in.center_hz > in.bandwidth_hz / 2.0)) {
    throw ArgumentError("crlb: band must lie above 0 Hz");
  }
  if (!std::isfinite(in.snr_inband_db)) throw ArgumentError("crlb: SNR must be finite");

  CrlbResult r;
  r.eta_in = std::pow(10.0, in.snr_inband_db / 10.0);
  r.coherence_term = r.eta_in * r.eta_in / (1.0 + 2.0 * r.eta_in);
  const double hi = in.center_hz + in.bandwidth_hz / 2.0;
  const double lo = in.center_hz - in.bandwidth_hz / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  r.integral_w2 = two_pi * two_pi * (hi * hi * hi - lo * lo * lo) / 3.0;
  r.variance_s2 = 1.0 / (2.0 * in.duration_s * r.coherence_term * r.integral_w2);
  r.std_s = std::sqrt(r.variance_s2);
  return r;
}

double crlb_general(std::span<const double> coherence_sq,
                    std::span<const double> freq_hz, double duration_s) {
  if (!(duration_s > 0.0)) throw ArgumentError("crlb_general: duration must be > 0");
  if (coherence_sq.size() != freq_hz.size() || freq_hz.size() < 2) {
    throw ArgumentError("crlb_general: need matching grids of >= 2 points");
  }
  for (double g : coherence_sq) {
    if (!(g >= 0.0 && g < 1.0)) {
      throw ArgumentError("crlb_general: coherence must lie in [0, 1)");
    }
  }
  const double two_pi = 2.0 * std::numbers::pi;
  auto integrand = [&](std::size_t k) {
    const double w = two_pi * freq_hz[k];
    return w * w * coherence_sq[k] / (1.0 - coherence_sq[k]);
  };
  double integral = 0.0;
  for (std::size_t k = 1; k < freq_hz.size(); ++k) {
    const double df = freq_hz[k] - freq_hz[k - 1];
    if (!(df > 0.0)) throw ArgumentError("crlb_general: grid must be increasing");
    integral += 0.5 * df * (integrand(k - 1) + integrand(k));
  }
  if (!(integral > 0.0)) {
    throw ArgumentError("crlb_general: zero coherence carries no delay information");
  }
  return std::sqrt(1.0 / (2.0 * duration_s * integral));
}

double coherence_from_snr(double eta) {
  return eta * eta / ((1.0 + eta) * (1.0 + eta));
}

}  // namespace tdoa
