// Copyright 2026 The beaconclust Authors.
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

#include <cstdint>
#include <fstream>
#include <istream>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace beaconclust {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Parses a full field as a double; throws kMalformedInput with `context`.
double parse_double(std::string_view text, std::string_view context);
std::uint64_t parse_uint(std::string_view text, std::string_view context);
std::int64_t parse_int(std::string_view text, std::string_view context);

std::vector<std::string_view> split(std::string_view line, char separator);
/// The pieces view into `line`; a temporary string would leave them dangling.
std::vector<std::string_view> split(std::string&& line, char separator) = delete;

/// Sequential reader for the line-oriented model formats. Errors name the
/// source and the current line number.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  /// Next line; kMalformedInput at end of input.
  std::string next(std::string_view expecting);
  /// Reads `<key><TAB><value>` and returns the value.
  std::string keyed(std::string_view key);

  std::string where() const;
  [[noreturn]] void error(const std::string& message) const;

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_number_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace beaconclust
