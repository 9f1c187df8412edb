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

#include "tdoa/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "tdoa/errors.hpp"

namespace tdoa::fft {
namespace {

// FFTW planning is not thread-safe but plan execution with the new-array
// interface is. Plans are created once per length under a global lock and
// then looked up through a per-thread cache.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

class PlanRegistry {
 public:
  ~PlanRegistry() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.r2c);
      fftw_destroy_plan(plans.c2r);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    const int len = static_cast<int>(n);
    // Scratch buffers only shape the plan; FFTW_ESTIMATE does not touch them.
    std::vector<double> real(n);
    std::vector<Complex> cplx(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    PlanPair plans;
    plans.r2c = fftw_plan_dft_r2c_1d(len, real.data(), c,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.c2r = fftw_plan_dft_c2r_1d(len, c, real.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    return plans_.emplace(n, plans).first->second;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::size_t, PlanPair> plans_;
};

PlanRegistry& registry() {
  static PlanRegistry instance;
  return instance;
}

const PlanPair& plans_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, const PlanPair*> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  const PlanPair& plans = registry().get(n);
  cache.emplace(n, &plans);
  return plans;
}

}  // namespace

void forward(std::span<const double> in, std::span<Complex> out) {
  const std::size_t n = in.size();
  if (n == 0) throw ArgumentError("fft::forward: empty input");
  if (out.size() != n / 2 + 1) {
    throw ArgumentError("fft::forward: output must hold n/2+1 bins");
  }
  const PlanPair& plans = plans_for(n);
  // r2c never writes its input, the const_cast is for the C signature.
  fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const Complex> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) throw ArgumentError("fft::inverse: empty output");
  if (in.size() != n / 2 + 1) {
    throw ArgumentError("fft::inverse: input must hold n/2+1 bins");
  }
  // c2r destroys its input.
  std::vector<Complex> scratch(in.begin(), in.end());
  const PlanPair& plans = plans_for(n);
  fftw_execute_dft_c2r(plans.c2r,
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
}

std::vector<Complex> forward(std::span<const double> in) {
  std::vector<Complex> out(in.size() / 2 + 1);
  forward(in, out);
  return out;
}

std::vector<double> inverse(std::span<const Complex> in, std::size_t n) {
  std::vector<double> out(n);
  inverse(in, out);
  return out;
}

}  // namespace tdoa::fft
