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

#include "beaconclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "beaconclust/error.hpp"
#include "beaconclust/parallel.hpp"

namespace beaconclust {

BeaconWeights::BeaconWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  for (const double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::kInvalidArgument, "beacon weights must be positive");
  }
}

BeaconWeights BeaconWeights::from_corpus(const Corpus& corpus, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::kInvalidArgument, "weight scale must be positive");
  const auto df = corpus.user_frequencies();
  std::vector<double> w(df.size());
  for (std::size_t b = 0; b < df.size(); ++b) w[b] = alpha * static_cast<double>(df[b]);
  return BeaconWeights(std::move(w));
}

double weighted_cosine(const SparseVector& a, const SparseVector& b, const BeaconWeights& weights) {
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [i, x] : a) norm_a += weights[i] * x * x;
  for (const auto& [i, x] : b) norm_b += weights[i] * x * x;
  if (!(norm_a > 0.0) || !(norm_b > 0.0)) fail(ErrorCode::kZeroVector, "weighted cosine of a zero vector");
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += weights[ia->first] * ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, dot / (std::sqrt(norm_a) * std::sqrt(norm_b)));
}

void KMeansConfig::validate() const {
  if (!(merge_threshold > 0.0 && merge_threshold < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "merge_threshold must be in (0, 1)");
  }
  if (max_rounds < 1) fail(ErrorCode::kInvalidArgument, "max_rounds must be at least 1");
  if (target_k && *target_k < 1) fail(ErrorCode::kInvalidArgument, "target_k must be at least 1");
  if (!(weight_scale > 0.0)) fail(ErrorCode::kInvalidArgument, "weight_scale must be positive");
  if (threads < 1) fail(ErrorCode::kInvalidArgument, "threads must be at least 1");
}

SparseVector binary_vector(const IndexedHistory& history) {
  SparseVector v;
  v.reserve(history.size());
  for (const auto b : history.beacons) v.emplace_back(b, 1.0);
  return v;
}

namespace {

// Centroids are kept dense over the vocabulary; the weighted norm is cached.
struct DenseCentroid {
  std::vector<double> values;
  std::size_t members = 0;
  double norm = 0.0;
};

double weighted_norm(const std::vector<double>& x, const BeaconWeights& w) {
  double s = 0.0;
  for (std::size_t b = 0; b < x.size(); ++b) s += w[static_cast<BeaconIndex>(b)] * x[b] * x[b];
  return std::sqrt(s);
}

double centroid_similarity(const DenseCentroid& a, const DenseCentroid& b, const BeaconWeights& w) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) dot += w[static_cast<BeaconIndex>(i)] * a.values[i] * b.values[i];
  return std::min(1.0, dot / (a.norm * b.norm));
}

// Folds centroid `from` into `into` as a member-weighted average.
void merge_into(DenseCentroid& into, const DenseCentroid& from, const BeaconWeights& w) {
  const double n_into = static_cast<double>(into.members);
  const double n_from = static_cast<double>(from.members);
  for (std::size_t b = 0; b < into.values.size(); ++b) {
    into.values[b] = (n_into * into.values[b] + n_from * from.values[b]) / (n_into + n_from);
  }
  into.members += from.members;
  into.norm = weighted_norm(into.values, w);
}

// Drops centroids flagged in `gone` and remaps assignments; `target[c]` is
// where members of centroid c now belong (c itself when it survives).
void compact(std::vector<DenseCentroid>& centroids, std::vector<ClusterIndex>& assignments,
             const std::vector<ClusterIndex>& target, const std::vector<bool>& gone) {
  std::vector<ClusterIndex> new_index(centroids.size(), 0);
  std::vector<DenseCentroid> kept;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (gone[c]) continue;
    new_index[c] = static_cast<ClusterIndex>(kept.size());
    kept.push_back(std::move(centroids[c]));
  }
  for (auto& a : assignments) a = new_index[target[a]];
  centroids = std::move(kept);
}

}  // namespace

KMeansResult kmeans_cluster(const Corpus& corpus, const KMeansConfig& config) {
  config.validate();
  if (corpus.num_users() == 0 || corpus.num_beacons() == 0) fail(ErrorCode::kEmptyCorpus, "k-means needs users");
  const auto weights = BeaconWeights::from_corpus(corpus, config.weight_scale);
  const std::size_t v = corpus.num_beacons();
  const std::size_t n = corpus.num_users();

  std::vector<double> user_norm(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (const auto b : corpus.user(j).beacons) s += weights[b];
    user_norm[j] = std::sqrt(s);
  }

  std::vector<DenseCentroid> centroids(v);
  for (std::size_t m = 0; m < v; ++m) {
    centroids[m].values.assign(v, 0.0);
    centroids[m].values[m] = 1.0;
    centroids[m].norm = std::sqrt(weights[static_cast<BeaconIndex>(m)]);
  }

  KMeansResult result;
  std::vector<ClusterIndex> assignments(n, 0);
  std::vector<ClusterIndex> previous;
  const auto shards = make_shards(n, kDefaultShards);

  for (std::size_t round = 1; round <= config.max_rounds; ++round) {
    result.rounds = round;
    parallel_for(shards.size(), config.threads, [&](std::size_t s) {
      for (std::size_t j = shards[s].begin; j < shards[s].end; ++j) {
        const auto& h = corpus.user(j);
        ClusterIndex best = 0;
        double best_sim = -1.0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
          double dot = 0.0;
          for (const auto b : h.beacons) dot += weights[b] * centroids[c].values[b];
          const double sim = dot / (centroids[c].norm * user_norm[j]);
          if (sim > best_sim) {
            best_sim = sim;
            best = static_cast<ClusterIndex>(c);
          }
        }
        assignments[j] = best;
      }
    });
    const bool stable = assignments == previous;

    // Centroid update: mean of member binary vectors; empty centroids vanish.
    for (auto& c : centroids) {
      std::fill(c.values.begin(), c.values.end(), 0.0);
      c.members = 0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto& c = centroids[assignments[j]];
      ++c.members;
      for (const auto b : corpus.user(j).beacons) c.values[b] += 1.0;
    }
    std::vector<ClusterIndex> identity(centroids.size());
    std::vector<bool> gone(centroids.size(), false);
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      identity[c] = static_cast<ClusterIndex>(c);
      if (centroids[c].members == 0) {
        gone[c] = true;
        continue;
      }
      for (auto& x : centroids[c].values) x /= static_cast<double>(centroids[c].members);
      centroids[c].norm = weighted_norm(centroids[c].values, weights);
    }
    compact(centroids, assignments, identity, gone);

    // Merge stage: greedy over pairs above the threshold, most similar first,
    // each centroid taking part in at most one merge per round.
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < centroids.size(); ++a) {
      for (std::size_t b = a + 1; b < centroids.size(); ++b) {
        const double sim = centroid_similarity(centroids[a], centroids[b], weights);
        if (sim >= config.merge_threshold) pairs.emplace_back(sim, a, b);
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
    });
    std::vector<bool> used(centroids.size(), false);
    gone.assign(centroids.size(), false);
    std::vector<ClusterIndex> target(centroids.size());
    for (std::size_t c = 0; c < centroids.size(); ++c) target[c] = static_cast<ClusterIndex>(c);
    std::size_t merges = 0;
    for (const auto& [sim, a, b] : pairs) {
      if (used[a] || used[b]) continue;
      used[a] = used[b] = true;
      merge_into(centroids[a], centroids[b], weights);
      gone[b] = true;
      target[b] = static_cast<ClusterIndex>(a);
      ++merges;
    }
    compact(centroids, assignments, target, gone);

    // Optional cap: keep merging the closest pair until at most target_k remain.
    while (config.target_k && centroids.size() > *config.target_k) {
      std::size_t best_a = 0;
      std::size_t best_b = 1;
      double best = -1.0;
      for (std::size_t a = 0; a < centroids.size(); ++a) {
        for (std::size_t b = a + 1; b < centroids.size(); ++b) {
          const double sim = centroid_similarity(centroids[a], centroids[b], weights);
          if (sim > best) {
            best = sim;
            best_a = a;
            best_b = b;
          }
        }
      }
      merge_into(centroids[best_a], centroids[best_b], weights);
      gone.assign(centroids.size(), false);
      gone[best_b] = true;
      target.resize(centroids.size());
      for (std::size_t c = 0; c < centroids.size(); ++c) target[c] = static_cast<ClusterIndex>(c);
      target[best_b] = static_cast<ClusterIndex>(best_a);
      compact(centroids, assignments, target, gone);
      ++merges;
    }

    result.merges += merges;
    if (merges == 0 && stable) break;
    previous = assignments;
  }

  result.assignments = std::move(assignments);
  result.centroids.reserve(centroids.size());
  for (const auto& c : centroids) {
    Centroid out;
    out.member_count = c.members;
    for (std::size_t b = 0; b < v; ++b) {
      if (c.values[b] != 0.0) out.vector.emplace_back(static_cast<BeaconIndex>(b), c.values[b]);
    }
    result.centroids.push_back(std::move(out));
  }
  return result;
}

}  // namespace beaconclust
