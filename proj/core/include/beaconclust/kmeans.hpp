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
#include <utility>
#include <vector>

#include "beaconclust/cluster_model.hpp"
#include "beaconclust/corpus.hpp"

namespace beaconclust {

/// (beacon index, value) pairs sorted by index, no duplicates.
using SparseVector = std::vector<std::pair<BeaconIndex, double>>;

/// Per-beacon weights w_i = alpha * |u(b_i)|, alpha > 0.
class BeaconWeights {
 public:
  explicit BeaconWeights(std::vector<double> weights);
  static BeaconWeights from_corpus(const Corpus& corpus, double alpha = 1.0);

  std::span<const double> values() const { return weights_; }
  double operator[](BeaconIndex beacon) const { return weights_[beacon]; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

/// sum w_i a_i b_i / (|a|_w |b|_w) with |x|_w = sqrt(sum w_i x_i^2).
/// Throws kZeroVector when either side has zero weighted norm.
double weighted_cosine(const SparseVector& a, const SparseVector& b, const BeaconWeights& weights);

struct Centroid {
  SparseVector vector;
  std::size_t member_count = 0;
};

struct KMeansConfig {
  double merge_threshold = 0.9;
  std::size_t max_rounds = 50;
  /// The algorithm is deterministic; the seed is recorded for provenance only.
  std::uint64_t seed = 0;
  /// When set, the closest centroid pairs are merged until at most this many remain.
  std::optional<std::size_t> target_k;
  double weight_scale = 1.0;
  std::size_t threads = 1;

  void validate() const;
};

struct KMeansResult {
  std::vector<Centroid> centroids;
  /// Centroid index per corpus user.
  std::vector<ClusterIndex> assignments;
  std::size_t rounds = 0;
  std::size_t merges = 0;
};

/// Weighted-cosine k-means over binary user vectors, starting from one
/// centroid per beacon, with a merge stage after every round.
KMeansResult kmeans_cluster(const Corpus& corpus, const KMeansConfig& config);

/// Binary vector of the beacons a user fired.
SparseVector binary_vector(const IndexedHistory& history);

}  // namespace beaconclust
