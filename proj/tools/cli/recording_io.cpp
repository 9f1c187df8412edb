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


#include "cli/recording_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "cli/csv.hpp"
#include "tdoa/errors.hpp"

namespace tdoa::cli {

namespace {

double parse_double(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ConfigError(where + ": not a number: '" + std::string(tok) + "'");
  }
  return v;
}

struct Sidecar {
  long channels = 0;
  double sample_rate_hz = 0.0;
};

Sidecar read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sidecar: " + path.string());
  Sidecar sc;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string_view val = std::string_view(tok).substr(eq + 1);
      if (key == "channels") {
        const double c = parse_double(val, path.string());
        if (c != static_cast<double>(static_cast<long>(c))) {
          throw ConfigError(path.string() + ": channels must be an integer");
        }
        sc.channels = static_cast<long>(c);
      } else if (key == "sample_rate_hz") {
        sc.sample_rate_hz = parse_double(val, path.string());
      }
    }
  }
  if (sc.channels < 1) {
    throw ConfigError(path.string() + ": missing or invalid channels=");
  }
  return sc;
}

ChannelData read_binary(const std::filesystem::path& path) {
  const Sidecar sc = read_sidecar(sidecar_path(path));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading input: " + path.string());
  const auto m = static_cast<std::size_t>(sc.channels);
  const std::size_t frame_bytes = m * sizeof(double);
  if (bytes.size() % frame_bytes != 0) {
    throw ConfigError(path.string() +
                      ": size is not a whole number of interleaved frames");
  }
  const std::size_t len = bytes.size() / frame_bytes;
  ChannelData out;
  out.sample_rate_hz = sc.sample_rate_hz;
  out.channels.assign(m, std::vector<double>(len));
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t c = 0; c < m; ++c) {
      double v;
      std::memcpy(&v, bytes.data() + (t * m + c) * sizeof(double), sizeof v);
      out.channels[c][t] = v;
    }
  }
  return out;
}

ChannelData read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input: " + path.string());
  ChannelData out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (char& ch : line) {
      if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    while (ls >> tok) row.push_back(parse_double(tok, where));
    if (row.empty()) continue;
    if (out.channels.empty()) {
      out.channels.resize(row.size());
    } else if (row.size() != out.channels.size()) {
      throw ConfigError(where + ": expected " +
                        std::to_string(out.channels.size()) + " columns, got " +
                        std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) out.channels[c].push_back(row[c]);
  }
  if (in.bad()) throw IoError("error reading input: " + path.string());
  return out;
}

}  // namespace

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "auto") return InputFormat::automatic;
  if (name == "binary") return InputFormat::binary;
  if (name == "text") return InputFormat::text;
  return std::nullopt;
}

std::filesystem::path sidecar_path(const std::filesystem::path& data) {
  auto p = data;
  p += ".meta";
  return p;
}

ChannelData read_channels(const std::filesystem::path& path, InputFormat format) {
  if (format == InputFormat::automatic) {
    format = std::filesystem::exists(sidecar_path(path)) ? InputFormat::binary
                                                         : InputFormat::text;
  }
  return format == InputFormat::binary ? read_binary(path) : read_text(path);
}

void write_binary_channels(const std::filesystem::path& path,
                           const std::vector<std::vector<double>>& channels,
                           double sample_rate_hz) {
  const std::size_t m = channels.size();
  const std::size_t len = m == 0 ? 0 : channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != len) throw ConfigError("channels have unequal lengths");
  }
  std::vector<double> inter(m * len);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t c = 0; c < m; ++c) inter[t * m + c] = channels[c][t];
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + path.string());
    out.write(reinterpret_cast<const char*>(inter.data()),
              static_cast<std::streamsize>(inter.size() * sizeof(double)));
    if (!out) throw IoError("error writing: " + path.string());
  }
  std::ofstream meta(sidecar_path(path), std::ios::trunc);
  if (!meta) throw IoError("cannot write: " + sidecar_path(path).string());
  meta << "channels=" << m << '\n'
       << "sample_rate_hz=" << format_real(sample_rate_hz) << '\n';
  if (!meta) throw IoError("error writing: " + sidecar_path(path).string());
}

}  // namespace tdoa::cli
