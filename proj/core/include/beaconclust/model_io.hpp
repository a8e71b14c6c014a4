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

#include <filesystem>
#include <iosfwd>

#include "beaconclust/cluster_model.hpp"

namespace beaconclust {

// Model file grammar (one record per LF-terminated line, fields split by TAB):
//
//   beaconclust-model<TAB>1
//   k<TAB><K>
//   vocabulary<TAB><V>
//   <beacon id>                              V lines, vocabulary order
//   priors<TAB><p_0><TAB>...<TAB><p_K-1>
//   beacon_given_cluster<TAB><N>
//   <cluster><TAB><beacon id><TAB><p(b|c)>   N lines, zeros omitted
//   cluster_given_beacon<TAB><M>
//   <beacon id><TAB><cluster><TAB><p(c|b)>   M lines, zeros omitted
//   end
//
// Reals use the shortest decimal form that parses back to the same double.

void write_model(const ClusterModel& model, std::ostream& out);
void write_model(const ClusterModel& model, const std::filesystem::path& path);
ClusterModel read_model(std::istream& in);
ClusterModel read_model(const std::filesystem::path& path);

}  // namespace beaconclust
