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
#include <map>
#include <string>

namespace beaconclust {

/// Beacon counts for one user inside the lookback window.
struct UserHistory {
  std::string user;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  /// Builds a history from counts, computing the total. Throws kEmptyHistory
  /// when there are no events and kInvalidArgument on zero counts.
  static UserHistory from_counts(std::string user, std::map<std::string, std::uint64_t> counts);

  /// p(b|u) = n(u,b) / n(u)
  double beacon_probability(const std::string& beacon) const;
};

}  // namespace beaconclust
