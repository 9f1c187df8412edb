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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tdoa::fft {

using Complex = std::complex<double>;

// Real-input DFT. `out` must hold n/2 + 1 bins. Unnormalized:
//   X[k] = sum_n x[n] exp(-j 2 pi k n / n_total).
void forward(std::span<const double> in, std::span<Complex> out);

// Inverse of `forward` from a one-sided half spectrum, Hermitian symmetry
// implied. `out.size()` selects the transform length. Normalized by 1/n so
// inverse(forward(x)) == x. Imaginary parts of the DC and (even n) Nyquist
// bins are ignored.
void inverse(std::span<const Complex> in, std::span<double> out);

std::vector<Complex> forward(std::span<const double> in);
std::vector<double> inverse(std::span<const Complex> in, std::size_t n);

}  // namespace tdoa::fft
