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

#include "beaconclust/text_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "beaconclust/error.hpp"

namespace beaconclust {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) fail(ErrorCode::kInvalidArgument, "cannot format double");
  return std::string(buffer.data(), end);
}

namespace {

std::string quote(std::string_view text) { return "'" + std::string(text) + "'"; }

}  // namespace

double parse_double(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    fail(ErrorCode::kMalformedInput, std::string(context) + ": expected a real number, got " + quote(text));
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, std::string_view context) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    fail(ErrorCode::kMalformedInput,
         std::string(context) + ": expected a non-negative integer, got " + quote(text));
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view context) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    fail(ErrorCode::kMalformedInput, std::string(context) + ": expected an integer, got " + quote(text));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char separator) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(separator, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string LineReader::next(std::string_view expecting) {
  std::string line;
  if (!std::getline(in_, line)) {
    fail(ErrorCode::kMalformedInput, source_ + ": unexpected end of file, expecting " + std::string(expecting));
  }
  ++line_number_;
  return line;
}

std::string LineReader::keyed(std::string_view key) {
  const auto line = next(key);
  const auto fields = split(line, '\t');
  if (fields.size() != 2 || fields[0] != key) error("expected '" + std::string(key) + "<TAB>value'");
  return std::string(fields[1]);
}

std::string LineReader::where() const { return source_ + " line " + std::to_string(line_number_); }

void LineReader::error(const std::string& message) const {
  fail(ErrorCode::kMalformedInput, where() + ": " + message);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace beaconclust
