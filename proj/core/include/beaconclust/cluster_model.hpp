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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beaconclust/history.hpp"
#include "beaconclust/vocabulary.hpp"

namespace beaconclust {

using ClusterIndex = std::uint32_t;

/// Tolerance for every row-stochastic check on probability tables.
inline constexpr double kStochasticTolerance = 1e-9;

/// Trained cluster parameters plus the beacon -> cluster table used at
/// serving time. Immutable once constructed, so concurrent scoring is safe.
///
/// Tables are dense: beacon_given_cluster is K x V row-major, and
/// cluster_given_beacon is V x K row-major. A beacon whose cluster row is all
/// zeros has no mapping and is ignored when scoring.
class ClusterModel {
 public:
  /// Derives p(c|b) = p(c) p(b|c) / sum_m p(c_m) p(b|c_m) from the parameters.
  static ClusterModel from_parameters(Vocabulary vocabulary, std::vector<double> priors,
                                      std::vector<double> beacon_given_cluster);

  /// Takes all three tables as given (used by the file reader and tests).
  static ClusterModel from_tables(Vocabulary vocabulary, std::vector<double> priors,
                                  std::vector<double> beacon_given_cluster,
                                  std::vector<double> cluster_given_beacon);

  std::size_t k() const { return priors_.size(); }
  std::size_t num_beacons() const { return vocabulary_.size(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::span<const double> priors() const { return priors_; }
  std::span<const double> beacon_given_cluster(ClusterIndex cluster) const;
  std::span<const double> cluster_given_beacon(BeaconIndex beacon) const;
  bool has_mapping(BeaconIndex beacon) const;

  /// Throws kInvariantViolation when any stochasticity constraint is broken.
  void validate() const;

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;

 private:
  ClusterModel() = default;

  Vocabulary vocabulary_;
  std::vector<double> priors_;
  std::vector<double> beacon_given_cluster_;
  std::vector<double> cluster_given_beacon_;
};

struct Assignment {
  std::string user;
  ClusterIndex cluster = 0;
  std::optional<std::vector<double>> posterior;
};

/// p(c_i|u) = sum_k p(c_i|b_k) p(b_k|u), renormalized over clusters.
/// Beacons outside the model vocabulary contribute nothing.
std::vector<double> score_user(const ClusterModel& model, const UserHistory& history);

/// Argmax of score_user, ties to the lowest cluster index.
Assignment assign_user(const ClusterModel& model, const UserHistory& history);

/// Index of the largest value; the first one wins ties.
ClusterIndex argmax(std::span<const double> values);

}  // namespace beaconclust
