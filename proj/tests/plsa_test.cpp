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
#include <sstream>

#include "beaconclust/error.hpp"
#include "beaconclust/eval.hpp"
#include "beaconclust/ingest.hpp"
#include "beaconclust/plsa.hpp"
#include "beaconclust/synthgen.hpp"
#include "oracle/brute_force.hpp"
#include "oracle/test_corpora.hpp"

namespace beaconclust {
namespace {

using oracle::Matrix;
using testing::corpus_from_counts;
using testing::flatten;

PlsaConfig config(std::size_t k) {
  PlsaConfig c;
  c.k = k;
  c.shards = 3;
  return c;
}

PlsaModel make_model(const Corpus& corpus, const Matrix& wgc, const Matrix& cgd) {
  PlsaModel m;
  m.k = wgc.size();
  m.vocabulary = corpus.vocabulary();
  for (const auto& h : corpus.users()) m.users.push_back(h.user);
  m.word_given_cluster = flatten(wgc);
  m.cluster_given_doc = flatten(cgd);
  return m;
}

PlsaPosteriors make_posteriors(const Corpus& corpus, std::size_t k, const std::vector<double>& values) {
  PlsaPosteriors p;
  p.k = k;
  std::size_t entries = 0;
  for (const auto& h : corpus.users()) {
    p.offsets.push_back(entries);
    entries += h.size();
  }
  p.values = values;
  return p;
}

TEST(PlsaEStep, SingleClusterAndUniformModel) {
  const auto corpus = corpus_from_counts({{2, 1}, {0, 3}});
  const auto one = plsa_e_step(make_model(corpus, {{0.3, 0.7}}, {{1}, {1}}), corpus, config(1));
  for (const double x : one.values) EXPECT_DOUBLE_EQ(x, 1.0);
  const auto uniform =
      plsa_e_step(make_model(corpus, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}),
                  corpus, config(3));
  for (const double x : uniform.values) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
}

void expect_posteriors_match(const PlsaPosteriors& got, const Corpus& corpus, const std::vector<Matrix>& expected) {
  for (std::size_t d = 0; d < corpus.num_users(); ++d) {
    const auto& h = corpus.user(d);
    for (std::size_t e = 0; e < h.size(); ++e) {
      const auto row = got.at(d, e);
      for (std::size_t c = 0; c < got.k; ++c) EXPECT_NEAR(row[c], expected[d][h.beacons[e]][c], 1e-10);
    }
  }
}

TEST(PlsaEStep, TwoByTwoMatchesJointTable) {
  const Matrix counts = {{2, 1}, {1, 3}};
  const auto corpus = corpus_from_counts(counts);
  const Matrix wgc = {{0.7, 0.3}, {0.2, 0.8}};
  const Matrix cgd = {{0.6, 0.4}, {0.1, 0.9}};
  const auto got = plsa_e_step(make_model(corpus, wgc, cgd), corpus, config(2));
  expect_posteriors_match(got, corpus, oracle::plsa_posteriors(wgc, cgd, counts));
  // d0,w0: 0.6*0.7 / (0.6*0.7 + 0.4*0.2)
  EXPECT_NEAR(got.at(0, 0)[0], 0.42 / 0.5, 1e-15);
}

TEST(PlsaMStep, HandWorkedInstance) {
  const auto corpus = corpus_from_counts({{2, 1}, {0, 3}});
  const auto post = make_posteriors(corpus, 2, {0.6, 0.4, 0.3, 0.7, 0.5, 0.5});
  const auto m = plsa_m_step(post, corpus, config(2));
  EXPECT_NEAR(m.word_row(0)[0], 0.4, 1e-15);
  EXPECT_NEAR(m.word_row(0)[1], 0.6, 1e-15);
  EXPECT_NEAR(m.word_row(1)[0], 0.8 / 3, 1e-15);
  EXPECT_NEAR(m.word_row(1)[1], 2.2 / 3, 1e-15);
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_NEAR(m.doc_row(d)[0], 0.5, 1e-15);
    EXPECT_NEAR(m.doc_row(d)[1], 0.5, 1e-15);
  }
}

TEST(PlsaMStep, SingleDocumentSingleWord) {
  const auto corpus = corpus_from_counts({{4}});
  const auto m = plsa_m_step(make_posteriors(corpus, 3, {0.2, 0.5, 0.3}), corpus, config(3));
  for (ClusterIndex c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(m.word_row(c)[0], 1.0);
  EXPECT_DOUBLE_EQ(m.doc_row(0)[0], 0.2);
  EXPECT_DOUBLE_EQ(m.doc_row(0)[1], 0.5);
  EXPECT_DOUBLE_EQ(m.doc_row(0)[2], 0.3);
}

TEST(PlsaProperty, StepsMatchOracle) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t users = 1 + gen() % 4;
    const std::size_t words = 1 + gen() % 5;
    const std::size_t k = 1 + gen() % 3;
    const auto counts = testing::random_counts(gen, users, words);
    const auto corpus = corpus_from_counts(counts);
    const auto wgc = testing::random_stochastic(gen, k, words);
    const auto cgd = testing::random_stochastic(gen, users, k);
    const auto expected = oracle::plsa_posteriors(wgc, cgd, counts);
    const auto post = plsa_e_step(make_model(corpus, wgc, cgd), corpus, config(k));
    expect_posteriors_match(post, corpus, expected);

    Matrix w2;
    Matrix d2;
    oracle::plsa_m_step(expected, counts, w2, d2);
    const auto m = plsa_m_step(post, corpus, config(k));
    for (std::size_t c = 0; c < k; ++c) {
      double row = 0.0;
      for (std::size_t w = 0; w < words; ++w) {
        EXPECT_NEAR(m.word_row(static_cast<ClusterIndex>(c))[w], w2[c][w], 1e-10);
        row += m.word_row(static_cast<ClusterIndex>(c))[w];
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
    for (std::size_t d = 0; d < users; ++d) {
      double row = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        EXPECT_NEAR(m.doc_row(d)[c], d2[d][c], 1e-10);
        row += m.doc_row(d)[c];
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

TEST(PlsaTrain, SingleClusterIsUnigramLikelihood) {
  const Matrix counts = {{2, 1, 0}, {0, 3, 1}, {5, 0, 1}};
  const auto corpus = corpus_from_counts(counts);
  double expected = 0.0;
  for (const auto& row : counts) {
    for (std::size_t w = 0; w < row.size(); ++w) {
      if (row[w] > 0) expected += row[w] * std::log(corpus.beacon_marginals()[w]);
    }
  }
  const auto result = plsa_train(corpus, config(1));
  EXPECT_NEAR(result.trace.back().log_likelihood, expected, 1e-9);
  EXPECT_NEAR(plsa_log_likelihood(result.model, corpus), expected, 1e-9);
}

TEST(PlsaTrain, LikelihoodIsMonotone) {
  std::mt19937_64 gen(43);
  for (int corpus_seed = 0; corpus_seed < 5; ++corpus_seed) {
    const auto corpus = corpus_from_counts(testing::random_counts(gen, 40, 15, 6, 0.3));
    auto cfg = config(4);
    cfg.seed = static_cast<std::uint64_t>(corpus_seed);
    cfg.tol = 1e-300;
    cfg.max_iters = 60;
    const auto result = plsa_train(corpus, cfg);
    ASSERT_GE(result.trace.size(), 50u);
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
      EXPECT_GE(result.trace[i].log_likelihood, result.trace[i - 1].log_likelihood - 1e-9) << "iteration " << i;
    }
  }
}

TEST(PlsaTrain, RecoversPlantedDisjointPartition) {
  SynthConfig sc;
  sc.k_true = 3;
  sc.n_users = 300;
  sc.n_beacons = 30;
  sc.seed = 2;
  const auto data = generate(sc);
  const auto corpus = build_corpus(data.events, sc.window_days, sc.now);
  auto cfg = config(3);
  cfg.seed = 1;
  cfg.max_iters = 200;
  const auto result = plsa_train(corpus, cfg);
  const auto labels = data.truth.label_map();
  std::vector<std::int64_t> predicted;
  std::vector<std::int64_t> planted;
  for (std::size_t j = 0; j < corpus.num_users(); ++j) {
    predicted.push_back(plsa_assign(result.model, corpus.user(j).user).cluster);
    planted.push_back(labels.at(corpus.user(j).user));
  }
  EXPECT_DOUBLE_EQ(adjusted_rand_index(predicted, planted), 1.0);
}

TEST(PlsaAssign, RefusesUnseenUsers) {
  const auto corpus = corpus_from_counts({{2, 1}, {0, 3}});
  const auto model = make_model(corpus, {{0.4, 0.6}, {0.5, 0.5}}, {{0.3, 0.7}, {0.9, 0.1}});
  EXPECT_EQ(plsa_assign(model, corpus.user(0).user).cluster, 1u);
  EXPECT_EQ(plsa_assign(model, corpus.user(1).user).cluster, 0u);
  try {
    plsa_assign(model, "stranger");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnseenUser);
  }
}

TEST(PlsaModelIo, RoundTrip) {
  const auto corpus = corpus_from_counts({{2, 1, 0}, {0, 3, 1}, {5, 0, 1}});
  auto cfg = config(2);
  cfg.seed = 3;
  const auto model = plsa_train(corpus, cfg).model;
  std::stringstream buffer;
  write_plsa_model(model, buffer);
  EXPECT_EQ(read_plsa_model(buffer), model);
}

}  // namespace
}  // namespace beaconclust
