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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "beaconclust/ingest.hpp"

namespace beaconclust {

enum class Overlap { kDisjoint, kDirichlet };

struct SynthConfig {
  std::size_t k_true = 5;
  std::size_t n_users = 1000;
  std::size_t n_beacons = 100;
  std::size_t min_events = 20;
  std::size_t max_events = 60;
  Overlap overlap = Overlap::kDisjoint;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::int64_t now = 1'700'000'000;
  int window_days = kDefaultWindowDays;

  void validate() const;
};

/// Ground truth behind a synthetic log.
struct PlantedTruth {
  std::size_t k_true = 0;
  std::vector<double> priors;
  /// K_true x n_beacons row-major.
  std::vector<double> beacon_given_cluster;
  std::vector<std::string> beacons;
  /// Users in generation order with their planted cluster.
  std::vector<std::string> users;
  std::vector<std::uint32_t> labels;

  std::map<std::string, std::int64_t> label_map() const;
};

struct SynthData {
  std::vector<EventRecord> events;
  PlantedTruth truth;
};

/// Draws a cluster per user from the priors, an event count uniformly in
/// [min_events, max_events], then that many beacons i.i.d. from the cluster's
/// distribution. Timestamps fall inside the window ending at `now`.
SynthData generate(const SynthConfig& config);

std::string beacon_name(std::size_t index, std::size_t count);
std::string user_name(std::size_t index, std::size_t count);

}  // namespace beaconclust
