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


#include "cli/config_file.hpp"

#include <fstream>

#include "tdoa/errors.hpp"

namespace tdoa::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> read_config_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (key.empty() || key == "config") {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": invalid key");
    }
    args.push_back("--" + key + "=" + value);
  }
  if (in.bad()) throw IoError("error reading config file: " + path.string());
  return args;
}

}  // namespace tdoa::cli
