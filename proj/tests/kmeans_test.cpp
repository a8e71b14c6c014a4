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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "beaconclust/error.hpp"
#include "beaconclust/kmeans.hpp"
#include "oracle/test_corpora.hpp"

namespace beaconclust {
namespace {

using testing::corpus_from_counts;

TEST(WeightedCosine, HandValues) {
  const BeaconWeights w({4.0, 1.0});
  const SparseVector a = {{0, 1.0}};
  const SparseVector b = {{0, 1.0}, {1, 1.0}};
  EXPECT_NEAR(weighted_cosine(a, b, w), 4.0 / (2.0 * std::sqrt(5.0)), 1e-15);
  EXPECT_NEAR(weighted_cosine(a, b, w), 0.894427191, 1e-9);
  EXPECT_DOUBLE_EQ(weighted_cosine(b, b, w), 1.0);
  EXPECT_DOUBLE_EQ(weighted_cosine(a, SparseVector{{1, 2.0}}, w), 0.0);
  EXPECT_THROW(weighted_cosine(a, SparseVector{}, w), Error);
  EXPECT_THROW(BeaconWeights({1.0, 0.0}), Error);
}

TEST(WeightedCosineProperty, SymmetricBoundedScaleInvariant) {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t v = 1 + gen() % 8;
    std::vector<double> raw(v);
    for (auto& x : raw) x = u(gen);
    auto random_vector = [&] {
      SparseVector s;
      for (std::size_t b = 0; b < v; ++b) {
        if (gen() % 2) s.emplace_back(static_cast<BeaconIndex>(b), u(gen));
      }
      if (s.empty()) s.emplace_back(static_cast<BeaconIndex>(gen() % v), 1.0);
      return s;
    };
    const auto a = random_vector();
    const auto b = random_vector();
    const BeaconWeights w(raw);
    const double alpha = u(gen) * 10;
    auto scaled = raw;
    for (auto& x : scaled) x *= alpha;
    const double s = weighted_cosine(a, b, w);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, weighted_cosine(b, a, w), 1e-15);
    EXPECT_NEAR(s, weighted_cosine(a, b, BeaconWeights(scaled)), 1e-12);
  }
}

TEST(KMeans, SeparableGroups) {
  // Users 0-3 use beacons 0-2, users 4-7 use beacons 3-5.
  oracle::Matrix counts(8, std::vector<double>(6, 0.0));
  for (std::size_t u = 0; u < 8; ++u) {
    const std::size_t base = u < 4 ? 0 : 3;
    counts[u][base] = 1;
    counts[u][base + 1 + u % 2] = 2;
  }
  for (std::size_t u = 0; u < 4; ++u) counts[u][2] = 1;
  for (std::size_t u = 4; u < 8; ++u) counts[u][5] = 1;
  const auto result = kmeans_cluster(corpus_from_counts(counts), KMeansConfig{});
  ASSERT_EQ(result.centroids.size(), 2u);
  for (std::size_t u = 1; u < 4; ++u) EXPECT_EQ(result.assignments[u], result.assignments[0]);
  for (std::size_t u = 5; u < 8; ++u) EXPECT_EQ(result.assignments[u], result.assignments[4]);
  EXPECT_NE(result.assignments[0], result.assignments[4]);
}

TEST(KMeans, IdenticalUsersCollapse) {
  const auto corpus = corpus_from_counts(oracle::Matrix(5, std::vector<double>{1, 3, 2, 1}));
  const auto result = kmeans_cluster(corpus, KMeansConfig{});
  EXPECT_EQ(result.centroids.size(), 1u);
  EXPECT_EQ(result.centroids[0].member_count, 5u);
  for (const auto a : result.assignments) EXPECT_EQ(a, 0u);
}

TEST(KMeansProperty, WeightScaleDoesNotChangeResult) {
  std::mt19937_64 gen(52);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = corpus_from_counts(testing::random_counts(gen, 30, 12, 3, 0.25));
    KMeansConfig base;
    base.merge_threshold = 0.5 + 0.1 * static_cast<double>(gen() % 4);
    auto scaled = base;
    scaled.weight_scale = 37.5;
    const auto a = kmeans_cluster(corpus, base);
    const auto b = kmeans_cluster(corpus, scaled);
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.merges, b.merges);
    EXPECT_EQ(a.rounds, b.rounds);
  }
}

TEST(KMeans, TargetKCapsCentroids) {
  std::mt19937_64 gen(53);
  const auto corpus = corpus_from_counts(testing::random_counts(gen, 40, 20, 3, 0.2));
  KMeansConfig cfg;
  cfg.target_k = 3;
  const auto result = kmeans_cluster(corpus, cfg);
  EXPECT_LE(result.centroids.size(), 3u);
  for (const auto a : result.assignments) EXPECT_LT(a, result.centroids.size());
}

TEST(KMeans, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 gen(54);
  const auto corpus = corpus_from_counts(testing::random_counts(gen, 60, 25, 3, 0.2));
  KMeansConfig cfg;
  cfg.merge_threshold = 0.6;
  const auto one = kmeans_cluster(corpus, cfg);
  cfg.threads = 4;
  const auto four = kmeans_cluster(corpus, cfg);
  EXPECT_EQ(one.assignments, four.assignments);
  EXPECT_EQ(one.merges, four.merges);
}

TEST(KMeans, InvalidConfig) {
  const auto corpus = corpus_from_counts({{1}});
  KMeansConfig cfg;
  cfg.merge_threshold = 1.5;
  EXPECT_THROW(kmeans_cluster(corpus, cfg), Error);
  cfg = KMeansConfig{};
  cfg.weight_scale = 0.0;
  EXPECT_THROW(kmeans_cluster(corpus, cfg), Error);
}

}  // namespace
}  // namespace beaconclust
