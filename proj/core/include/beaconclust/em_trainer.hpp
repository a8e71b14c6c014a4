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
#include <span>
#include <vector>

#include "beaconclust/cluster_model.hpp"
#include "beaconclust/corpus.hpp"
#include "beaconclust/parallel.hpp"

namespace beaconclust {

enum class ClusteringMode { kHard, kSoft };

struct TrainConfig {
  std::size_t k = 600;
  ClusteringMode mode = ClusteringMode::kHard;
  std::size_t max_iters = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t shards = kDefaultShards;
  /// Speed only; never changes results.
  std::size_t threads = 1;
  /// Additive mass on every p(b|c) entry before renormalizing. Zero disables.
  double smoothing = 0.0;

  void validate() const;
};

/// p(c_i|u_j) for every training user. Hard mode stores one cluster per user.
class Responsibilities {
 public:
  static Responsibilities hard(std::size_t k, std::vector<ClusterIndex> clusters);
  static Responsibilities soft(std::size_t k, std::vector<double> weights);

  ClusteringMode mode() const { return mode_; }
  std::size_t k() const { return k_; }
  std::size_t num_users() const;
  double weight(std::size_t user, ClusterIndex cluster) const;
  /// Hard mode: the assigned cluster. Soft mode: the argmax.
  ClusterIndex cluster_of(std::size_t user) const;
  std::span<const ClusterIndex> hard_clusters() const { return clusters_; }
  std::span<const double> soft_row(std::size_t user) const;

  friend bool operator==(const Responsibilities&, const Responsibilities&) = default;

 private:
  ClusteringMode mode_ = ClusteringMode::kHard;
  std::size_t k_ = 0;
  std::vector<ClusterIndex> clusters_;
  std::vector<double> weights_;
};

/// p(c) and p(b|c) (K x V row-major) as produced by one maximization step.
struct Parameters {
  std::size_t k = 0;
  std::size_t num_beacons = 0;
  std::vector<double> priors;
  std::vector<double> beacon_given_cluster;
  /// Clusters that received no mass; their p(b|c) row is uniform.
  std::vector<ClusterIndex> empty_clusters;

  std::span<const double> row(ClusterIndex cluster) const {
    return std::span<const double>(beacon_given_cluster).subspan(cluster * num_beacons, num_beacons);
  }
  /// Largest absolute difference over all priors and p(b|c) entries.
  double max_abs_change(const Parameters& other) const;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct IterationStats {
  std::size_t iteration = 0;
  double log_objective = 0.0;
  double max_param_delta = 0.0;
};

struct TrainState {
  Parameters params;
  Responsibilities responsibilities;
  std::size_t iteration = 0;
  std::vector<IterationStats> trace;
};

struct ExpectationResult {
  Responsibilities responsibilities;
  /// sum_j sum_{i in support} log p(c_i|u_j), using the unnormalized scores.
  double log_objective = 0.0;
};

/// Random hard assignment followed by one maximization step. Throws
/// kInitInfeasible when K exceeds the number of users.
TrainState init_random(const Corpus& corpus, const TrainConfig& config);

/// The random user -> cluster draw used by init_random. Every cluster ends up
/// with at least one user.
std::vector<ClusterIndex> random_assignment(std::size_t num_users, std::size_t k,
                                            std::uint64_t seed);

/// p(c_i|u_j) = sum_k p(c_i) p(b_k|c_i) / p(b_k) * p(b_k|u_j), with p(b_k)
/// the corpus empirical marginal.
ExpectationResult expectation_step(const Parameters& params, const Corpus& corpus,
                                   const TrainConfig& config);

/// p(c_i) = sum_j p(u_j) p(c_i|u_j) and
/// p(b_k|c_i) = sum_j p(b_k|u_j) p(c_i|u_j) p(u_j) / p(c_i).
Parameters maximization_step(const Responsibilities& responsibilities, const Corpus& corpus,
                             const TrainConfig& config);

struct TrainResult {
  ClusterModel model;
  Parameters params;
  Responsibilities responsibilities;
  std::vector<IterationStats> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

TrainResult train(const Corpus& corpus, const TrainConfig& config);

ClusterModel export_model(const Parameters& params, const Vocabulary& vocabulary);

}  // namespace beaconclust
