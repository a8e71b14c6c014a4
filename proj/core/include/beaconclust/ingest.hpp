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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beaconclust/corpus.hpp"

namespace beaconclust {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr int kDefaultWindowDays = 60;

struct EventRecord {
  std::int64_t timestamp = 0;
  std::string user;
  std::string beacon;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Parses `timestamp<TAB>user_id<TAB>beacon_id`. Throws kMalformedInput
/// naming `line_number`.
EventRecord parse_event(std::string_view line, std::size_t line_number);

std::string format_event(const EventRecord& event);

struct ReadOptions {
  /// Malformed lines are fatal when set; otherwise they are skipped and
  /// reported through `diagnostics`.
  bool strict = true;
  std::vector<std::string>* diagnostics = nullptr;
};

std::vector<EventRecord> read_events(std::istream& in, const ReadOptions& options = {});
std::vector<EventRecord> read_events(const std::filesystem::path& path,
                                     const ReadOptions& options = {});
void write_events(std::span<const EventRecord> events, std::ostream& out);

/// Counts events with timestamp in [now - window_days days, now] per
/// (user, beacon). The result does not depend on the order of `events`.
Corpus build_corpus(std::span<const EventRecord> events, int window_days, std::int64_t now);

struct FilterOptions {
  std::uint64_t min_users = 3;
  double max_user_fraction = 0.2;
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
};

/// Drops beacons fired by fewer than min_users distinct users or by more than
/// max_user_fraction of all users, optionally samples the survivors uniformly
/// down to sample_size, then drops users left without events.
Corpus filter_beacons(const Corpus& corpus, const FilterOptions& options);

}  // namespace beaconclust
