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
#include <stdexcept>
#include <string>
#include <vector>

namespace tdoa::cli {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a flat key=value file and returns "--key=value" arguments in file
// order. Blank lines and lines starting with '#' are skipped.
// Throws IoError if unreadable, tdoa::ConfigError on a malformed line.
std::vector<std::string> read_config_args(const std::filesystem::path& path);

}  // namespace tdoa::cli
