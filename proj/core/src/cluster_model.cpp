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

#include "beaconclust/cluster_model.hpp"

#include <cmath>
#include <string>

#include "beaconclust/error.hpp"

namespace beaconclust {

namespace {

void check_distribution(std::span<const double> values, const std::string& what) {
  double sum = 0.0;
  for (const double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorCode::kInvariantViolation, what + " has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    fail(ErrorCode::kInvariantViolation, what + " sums to " + std::to_string(sum) + ", expected 1");
  }
}

bool all_zero(std::span<const double> values) {
  for (const double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace

ClusterModel ClusterModel::from_parameters(Vocabulary vocabulary, std::vector<double> priors,
                                           std::vector<double> beacon_given_cluster) {
  const std::size_t k = priors.size();
  const std::size_t v = vocabulary.size();
  if (beacon_given_cluster.size() != k * v) {
    fail(ErrorCode::kInvalidArgument, "beacon_given_cluster must hold K x V entries");
  }
  std::vector<double> cluster_given_beacon(v * k, 0.0);
  for (std::size_t b = 0; b < v; ++b) {
    double norm = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double joint = priors[c] * beacon_given_cluster[c * v + b];
      cluster_given_beacon[b * k + c] = joint;
      norm += joint;
    }
    // A beacon no cluster can emit keeps an all-zero row, i.e. no mapping.
    if (norm > 0.0) {
      for (std::size_t c = 0; c < k; ++c) cluster_given_beacon[b * k + c] /= norm;
    }
  }
  return from_tables(std::move(vocabulary), std::move(priors), std::move(beacon_given_cluster),
                     std::move(cluster_given_beacon));
}

ClusterModel ClusterModel::from_tables(Vocabulary vocabulary, std::vector<double> priors,
                                       std::vector<double> beacon_given_cluster,
                                       std::vector<double> cluster_given_beacon) {
  const std::size_t k = priors.size();
  const std::size_t v = vocabulary.size();
  if (k == 0) fail(ErrorCode::kInvalidArgument, "model needs at least one cluster");
  if (v == 0) fail(ErrorCode::kInvalidArgument, "model needs a non-empty vocabulary");
  if (beacon_given_cluster.size() != k * v || cluster_given_beacon.size() != k * v) {
    fail(ErrorCode::kInvalidArgument, "model tables must hold K x V entries");
  }
  ClusterModel model;
  model.vocabulary_ = std::move(vocabulary);
  model.priors_ = std::move(priors);
  model.beacon_given_cluster_ = std::move(beacon_given_cluster);
  model.cluster_given_beacon_ = std::move(cluster_given_beacon);
  model.validate();
  return model;
}

std::span<const double> ClusterModel::beacon_given_cluster(ClusterIndex cluster) const {
  return std::span<const double>(beacon_given_cluster_).subspan(cluster * num_beacons(), num_beacons());
}

std::span<const double> ClusterModel::cluster_given_beacon(BeaconIndex beacon) const {
  return std::span<const double>(cluster_given_beacon_).subspan(beacon * k(), k());
}

bool ClusterModel::has_mapping(BeaconIndex beacon) const { return !all_zero(cluster_given_beacon(beacon)); }

void ClusterModel::validate() const {
  check_distribution(priors_, "cluster priors");
  for (std::size_t c = 0; c < k(); ++c) {
    check_distribution(beacon_given_cluster(static_cast<ClusterIndex>(c)),
                       "p(b|c) row of cluster " + std::to_string(c));
  }
  for (std::size_t b = 0; b < num_beacons(); ++b) {
    const auto row = cluster_given_beacon(static_cast<BeaconIndex>(b));
    if (all_zero(row)) continue;
    check_distribution(row, "p(c|b) row of beacon '" + vocabulary_.at(static_cast<BeaconIndex>(b)) + "'");
  }
}

ClusterIndex argmax(std::span<const double> values) {
  ClusterIndex best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<ClusterIndex>(i);
  }
  return best;
}

std::vector<double> score_user(const ClusterModel& model, const UserHistory& history) {
  if (history.counts.empty() || history.total == 0) {
    fail(ErrorCode::kEmptyHistory, "user '" + history.user + "' has no events");
  }
  std::vector<double> scores(model.k(), 0.0);
  bool known = false;
  const double total = static_cast<double>(history.total);
  for (const auto& [beacon, count] : history.counts) {
    const auto index = model.vocabulary().find(beacon);
    if (!index || !model.has_mapping(*index)) continue;
    known = true;
    const double p_beacon = static_cast<double>(count) / total;
    const auto row = model.cluster_given_beacon(*index);
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += row[c] * p_beacon;
  }
  if (!known) {
    fail(ErrorCode::kNoKnownBeacons, "user '" + history.user + "' has no beacon in the model vocabulary");
  }
  double sum = 0.0;
  for (const double s : scores) sum += s;
  for (double& s : scores) s /= sum;
  return scores;
}

Assignment assign_user(const ClusterModel& model, const UserHistory& history) {
  auto scores = score_user(model, history);
  Assignment result;
  result.user = history.user;
  result.cluster = argmax(scores);
  result.posterior = std::move(scores);
  return result;
}

}  // namespace beaconclust
