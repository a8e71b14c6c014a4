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

#include <random>

#include "beaconclust/cluster_model.hpp"
#include "beaconclust/error.hpp"
#include "oracle/brute_force.hpp"
#include "oracle/test_corpora.hpp"
#include "oracle/worked_example.hpp"

namespace beaconclust {
namespace {

using testing::two_cluster_model;

UserHistory history(std::map<std::string, std::uint64_t> counts) {
  return UserHistory::from_counts("u", std::move(counts));
}

TEST(ClusterModel, BayesExportMatchesHandValues) {
  const auto model = ClusterModel::from_parameters(Vocabulary({"b1", "b2"}), {0.25, 0.75}, {0.8, 0.2, 0.4, 0.6});
  EXPECT_NEAR(model.cluster_given_beacon(0)[0], 0.4, 1e-12);
  EXPECT_NEAR(model.cluster_given_beacon(0)[1], 0.6, 1e-12);
  EXPECT_NEAR(model.cluster_given_beacon(1)[0], 0.1, 1e-12);
  EXPECT_NEAR(model.cluster_given_beacon(1)[1], 0.9, 1e-12);
}

TEST(ClusterModel, WorkedExampleScores) {
  const auto model = two_cluster_model();
  const auto s = score_user(model, history({{"b1", 3}, {"b2", 1}}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 0.725, 1e-12);
  EXPECT_NEAR(s[1], 0.275, 1e-12);
  EXPECT_EQ(assign_user(model, history({{"b1", 3}, {"b2", 1}})).cluster, 0u);

  const auto t = score_user(model, history({{"b2", 10}}));
  EXPECT_NEAR(t[0], 0.2, 1e-12);
  EXPECT_NEAR(t[1], 0.8, 1e-12);
  EXPECT_EQ(assign_user(model, history({{"b2", 10}})).cluster, 1u);
}

TEST(ClusterModel, SingleClusterIsCertain) {
  const auto model = ClusterModel::from_parameters(Vocabulary({"x", "y"}), {1.0}, {0.3, 0.7});
  const auto s = score_user(model, history({{"x", 2}, {"y", 9}}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
}

TEST(ClusterModel, TiesGoToLowestIndex) {
  const auto model = ClusterModel::from_parameters(Vocabulary({"b"}), {0.5, 0.5}, {1.0, 1.0});
  const auto a = assign_user(model, history({{"b", 4}}));
  EXPECT_EQ(a.cluster, 0u);
  EXPECT_DOUBLE_EQ((*a.posterior)[0], 0.5);
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

TEST(ClusterModel, UnknownBeaconsOnly) {
  const auto model = two_cluster_model();
  try {
    score_user(model, history({{"b999", 1}}));
    FAIL() << "expected NoKnownBeacons";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoKnownBeacons);
  }
}

TEST(ClusterModel, UnknownBeaconsAreSkipped) {
  const auto model = two_cluster_model();
  const auto with_unknown = score_user(model, history({{"b1", 3}, {"b2", 1}, {"zz", 50}}));
  EXPECT_NEAR(with_unknown[0], 0.725, 1e-12);
  EXPECT_NEAR(with_unknown[1], 0.275, 1e-12);
}

TEST(ClusterModel, EmptyHistoryRejected) {
  UserHistory empty;
  empty.user = "nobody";
  try {
    score_user(two_cluster_model(), empty);
    FAIL() << "expected EmptyHistory";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyHistory);
  }
}

TEST(ClusterModel, RejectsNonStochasticTables) {
  EXPECT_THROW(ClusterModel::from_parameters(Vocabulary({"a", "b"}), {0.5, 0.3}, {0.5, 0.5, 0.5, 0.5}), Error);
  EXPECT_THROW(ClusterModel::from_parameters(Vocabulary({"a", "b"}), {0.5, 0.5}, {0.5, 0.6, 0.5, 0.5}), Error);
  EXPECT_THROW(ClusterModel::from_tables(Vocabulary({"a"}), {1.0}, {1.0}, {0.7}), Error);
}

TEST(ClusterModel, UnreachableBeaconHasNoMapping) {
  const auto model = ClusterModel::from_parameters(Vocabulary({"a", "b"}), {1.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(model.has_mapping(0));
  EXPECT_FALSE(model.has_mapping(1));
  EXPECT_THROW(score_user(model, history({{"b", 1}})), Error);
}

// Random models and histories, checked against the direct formula.
TEST(ClusterModelProperty, ScoreMatchesOracleAndInvariants) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + gen() % 4;
    const std::size_t v = 1 + gen() % 6;
    std::vector<std::string> ids;
    for (std::size_t b = 0; b < v; ++b) ids.push_back("b" + std::to_string(b));
    auto priors = testing::random_stochastic(gen, 1, k)[0];
    const auto bgc = testing::random_stochastic(gen, k, v);
    const auto model = ClusterModel::from_parameters(Vocabulary(ids), priors, testing::flatten(bgc));
    model.validate();

    oracle::Matrix cgb(v, std::vector<double>(k));
    for (std::size_t b = 0; b < v; ++b) {
      for (std::size_t c = 0; c < k; ++c) cgb[b][c] = model.cluster_given_beacon(static_cast<BeaconIndex>(b))[c];
    }
    std::vector<double> dense(v, 0.0);
    std::map<std::string, std::uint64_t> counts;
    for (std::size_t b = 0; b < v; ++b) {
      if (gen() % 2 == 0) continue;
      const auto n = 1 + gen() % 9;
      dense[b] = static_cast<double>(n);
      counts[ids[b]] = n;
    }
    if (counts.empty()) {
      dense[0] = 1;
      counts[ids[0]] = 1;
    }
    const auto s = score_user(model, history(counts));
    const auto expected = oracle::score(cgb, dense);
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      EXPECT_NEAR(s[c], expected[c], 1e-12);
      sum += s[c];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);

    // Scaling every count keeps p(b|u) and therefore the scores.
    auto scaled = counts;
    for (auto& [id, n] : scaled) n *= 7;
    const auto s7 = score_user(model, history(scaled));
    for (std::size_t c = 0; c < k; ++c) EXPECT_NEAR(s7[c], s[c], 1e-14);
    EXPECT_EQ(assign_user(model, history(scaled)).cluster, assign_user(model, history(counts)).cluster);
  }
}

TEST(ClusterModelProperty, ZeroProbabilityBeaconDoesNotMatter) {
  // Beacon "z" cannot be emitted by any cluster, so it carries no mapping.
  const auto model =
      ClusterModel::from_parameters(Vocabulary({"a", "b", "z"}), {0.4, 0.6}, {0.7, 0.3, 0.0, 0.2, 0.8, 0.0});
  EXPECT_EQ(score_user(model, history({{"a", 2}, {"b", 5}, {"z", 3}})), score_user(model, history({{"a", 2}, {"b", 5}})));
}

}  // namespace
}  // namespace beaconclust
