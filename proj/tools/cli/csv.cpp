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


#include "cli/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace tdoa::cli {

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::scientific, 9);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), res.ptr);
}

std::string rmse_csv(const RmseTable& table) {
  std::string out(kRmseHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    out += to_string(r.method);
    out += ',';
    out += std::to_string(r.num_elements);
    out += ',';
    out += format_real(r.snr_in_db);
    out += ',';
    out += format_real(r.snr_broadband_db);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += format_real(r.rmse_s);
    out += ',';
    out += format_real(r.crlb_std_s);
    out += ',';
    out += format_real(r.mean_error_s);
    out += '\n';
  }
  return out;
}

std::string crlb_csv(const std::vector<CrlbRow>& rows) {
  std::string out(kCrlbHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_real(r.snr_in_db);
    out += ',';
    out += format_real(r.snr_broadband_db);
    out += ',';
    out += format_real(r.crlb_std_s);
    out += '\n';
  }
  return out;
}

}  // namespace tdoa::cli
