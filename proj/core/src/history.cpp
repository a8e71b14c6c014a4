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

#include "beaconclust/history.hpp"

#include "beaconclust/error.hpp"

namespace beaconclust {

UserHistory UserHistory::from_counts(std::string user, std::map<std::string, std::uint64_t> counts) {
  UserHistory h;
  h.user = std::move(user);
  for (const auto& [beacon, n] : counts) {
    if (beacon.empty()) fail(ErrorCode::kInvalidArgument, "history for '" + h.user + "': empty beacon id");
    if (n == 0) fail(ErrorCode::kInvalidArgument, "history for '" + h.user + "': zero count for " + beacon);
    h.total += n;
  }
  if (h.total == 0) fail(ErrorCode::kEmptyHistory, "history for '" + h.user + "' has no events");
  h.counts = std::move(counts);
  return h;
}

double UserHistory::beacon_probability(const std::string& beacon) const {
  const auto it = counts.find(beacon);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

}  // namespace beaconclust
