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

#include "beaconclust/vocabulary.hpp"

#include "beaconclust/error.hpp"

namespace beaconclust {

Vocabulary::Vocabulary(std::vector<std::string> ids) : ids_(std::move(ids)) {
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].empty()) fail(ErrorCode::kInvalidArgument, "vocabulary: empty beacon id");
    if (!index_.emplace(ids_[i], static_cast<BeaconIndex>(i)).second) {
      fail(ErrorCode::kInvalidArgument, "vocabulary: duplicate beacon id '" + ids_[i] + "'");
    }
  }
}

std::optional<BeaconIndex> Vocabulary::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace beaconclust
