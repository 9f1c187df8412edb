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

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "cli/config_file.hpp"

namespace tdoa::cli {

enum class InputFormat { automatic, binary, text };

std::optional<InputFormat> parse_input_format(std::string_view name);

struct ChannelData {
  std::vector<std::vector<double>> channels;
  // 0 when the file does not specify it.
  double sample_rate_hz = 0.0;
};

// "<data path>.meta"
std::filesystem::path sidecar_path(const std::filesystem::path& data);

// Binary: headerless native-endian f64, channel-interleaved, with a sidecar
// holding `channels=` and `sample_rate_hz=` lines.
// Text: one row per sample, columns separated by whitespace or commas,
// '#' starts a comment.
// Automatic picks binary when the sidecar exists.
// Throws IoError on file access failures and tdoa::ConfigError on malformed
// or ragged content.
ChannelData read_channels(const std::filesystem::path& path, InputFormat format);

void write_binary_channels(const std::filesystem::path& path,
                           const std::vector<std::vector<double>>& channels,
                           double sample_rate_hz);

}  // namespace tdoa::cli
