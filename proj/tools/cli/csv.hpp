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

#include <string>
#include <string_view>

#include "tdoa/harness.hpp"

namespace tdoa::cli {

// Locale-independent scientific notation with 10 significant digits.
std::string format_real(double v);

inline constexpr std::string_view kRmseHeader =
    "method,M,snr_in_db,snr_broadband_db,trials,rmse_s,crlb_std_s,mean_error_s";
inline constexpr std::string_view kCrlbHeader =
    "snr_in_db,snr_broadband_db,crlb_std_s";

std::string rmse_csv(const RmseTable& table);

struct CrlbRow {
  double snr_in_db = 0.0;
  double snr_broadband_db = 0.0;
  double crlb_std_s = 0.0;
};

std::string crlb_csv(const std::vector<CrlbRow>& rows);

}  // namespace tdoa::cli
