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

#include "beaconclust/em_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beaconclust/error.hpp"
#include "beaconclust/random.hpp"

namespace beaconclust {

void TrainConfig::validate() const {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (max_iters < 1) fail(ErrorCode::kInvalidArgument, "max_iters must be at least 1");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  if (shards < 1) fail(ErrorCode::kInvalidArgument, "shards must be at least 1");
  if (threads < 1) fail(ErrorCode::kInvalidArgument, "threads must be at least 1");
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    fail(ErrorCode::kInvalidArgument, "smoothing must be a non-negative real");
  }
}

Responsibilities Responsibilities::hard(std::size_t k, std::vector<ClusterIndex> clusters) {
  for (const auto c : clusters) {
    if (c >= k) fail(ErrorCode::kInvalidArgument, "hard responsibility outside [0, k)");
  }
  Responsibilities r;
  r.mode_ = ClusteringMode::kHard;
  r.k_ = k;
  r.clusters_ = std::move(clusters);
  return r;
}

Responsibilities Responsibilities::soft(std::size_t k, std::vector<double> weights) {
  if (k == 0 || weights.size() % k != 0) fail(ErrorCode::kInvalidArgument, "soft responsibilities must be N x K");
  Responsibilities r;
  r.mode_ = ClusteringMode::kSoft;
  r.k_ = k;
  r.weights_ = std::move(weights);
  return r;
}

std::size_t Responsibilities::num_users() const {
  return mode_ == ClusteringMode::kHard ? clusters_.size() : weights_.size() / k_;
}

double Responsibilities::weight(std::size_t user, ClusterIndex cluster) const {
  if (mode_ == ClusteringMode::kHard) return clusters_[user] == cluster ? 1.0 : 0.0;
  return weights_[user * k_ + cluster];
}

ClusterIndex Responsibilities::cluster_of(std::size_t user) const {
  if (mode_ == ClusteringMode::kHard) return clusters_[user];
  return argmax(soft_row(user));
}

std::span<const double> Responsibilities::soft_row(std::size_t user) const {
  return std::span<const double>(weights_).subspan(user * k_, k_);
}

double Parameters::max_abs_change(const Parameters& other) const {
  if (priors.size() != other.priors.size() || beacon_given_cluster.size() != other.beacon_given_cluster.size()) {
    fail(ErrorCode::kInvalidArgument, "parameter tables differ in shape");
  }
  double delta = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) delta = std::max(delta, std::abs(priors[i] - other.priors[i]));
  for (std::size_t i = 0; i < beacon_given_cluster.size(); ++i) {
    delta = std::max(delta, std::abs(beacon_given_cluster[i] - other.beacon_given_cluster[i]));
  }
  return delta;
}

std::vector<ClusterIndex> random_assignment(std::size_t num_users, std::size_t k, std::uint64_t seed) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (k > num_users) {
    fail(ErrorCode::kInitInfeasible,
         "k = " + std::to_string(k) + " exceeds the number of users (" + std::to_string(num_users) + ")");
  }
  Rng rng(seed);
  std::vector<ClusterIndex> clusters(num_users);
  std::vector<std::size_t> sizes(k, 0);
  for (auto& c : clusters) {
    c = static_cast<ClusterIndex>(rng.uniform_index(k));
    ++sizes[c];
  }
  // Clusters the draw missed take a random user from a cluster that can spare one.
  for (std::size_t c = 0; c < k; ++c) {
    while (sizes[c] == 0) {
      const auto j = rng.uniform_index(num_users);
      if (sizes[clusters[j]] < 2) continue;
      --sizes[clusters[j]];
      clusters[j] = static_cast<ClusterIndex>(c);
      ++sizes[c];
    }
  }
  return clusters;
}

TrainState init_random(const Corpus& corpus, const TrainConfig& config) {
  config.validate();
  if (corpus.num_users() == 0) fail(ErrorCode::kEmptyCorpus, "corpus has no users");
  TrainState state;
  state.responsibilities =
      Responsibilities::hard(config.k, random_assignment(corpus.num_users(), config.k, config.seed));
  state.params = maximization_step(state.responsibilities, corpus, config);
  return state;
}

ExpectationResult expectation_step(const Parameters& params, const Corpus& corpus, const TrainConfig& config) {
  const std::size_t k = params.k;
  const std::size_t v = corpus.num_beacons();
  if (params.num_beacons != v) fail(ErrorCode::kInvalidArgument, "parameters and corpus vocabularies differ");
  const auto beacon_marginals = corpus.beacon_marginals();

  // p(c_i) p(b_k|c_i) / p(b_k), stored beacon-major.
  std::vector<double> weight(v * k);
  for (std::size_t b = 0; b < v; ++b) {
    if (!(beacon_marginals[b] > 0.0)) {
      fail(ErrorCode::kNumericalFailure,
           "beacon '" + corpus.vocabulary().at(static_cast<BeaconIndex>(b)) + "' has zero empirical mass");
    }
    for (std::size_t c = 0; c < k; ++c) {
      weight[b * k + c] = params.priors[c] * params.beacon_given_cluster[c * v + b] / beacon_marginals[b];
    }
  }

  const std::size_t n = corpus.num_users();
  const bool hard = config.mode == ClusteringMode::kHard;
  std::vector<ClusterIndex> clusters(hard ? n : 0);
  std::vector<double> soft(hard ? 0 : n * k);
  const auto shards = make_shards(n, config.shards);
  std::vector<double> shard_objective(shards.size(), 0.0);

  parallel_for(shards.size(), config.threads, [&](std::size_t s) {
    std::vector<double> scores(k);
    double objective = 0.0;
    for (std::size_t j = shards[s].begin; j < shards[s].end; ++j) {
      const auto& h = corpus.user(j);
      std::fill(scores.begin(), scores.end(), 0.0);
      for (std::size_t e = 0; e < h.size(); ++e) {
        const double p_beacon = h.probability(e);
        const double* row = &weight[h.beacons[e] * k];
        for (std::size_t c = 0; c < k; ++c) scores[c] += row[c] * p_beacon;
      }
      double sum = 0.0;
      for (const double x : scores) sum += x;
      if (!std::isfinite(sum) || !(sum > 0.0)) {
        fail(ErrorCode::kNumericalFailure, "user '" + h.user + "' has no finite positive cluster score");
      }
      if (hard) {
        const auto best = argmax(scores);
        clusters[j] = best;
        objective += std::log(scores[best]);
      } else {
        double* out = &soft[j * k];
        for (std::size_t c = 0; c < k; ++c) {
          out[c] = scores[c] / sum;
          if (out[c] > 0.0) objective += std::log(out[c]);
        }
      }
    }
    shard_objective[s] = objective;
  });

  ExpectationResult result;
  result.responsibilities = hard ? Responsibilities::hard(k, std::move(clusters))
                                 : Responsibilities::soft(k, std::move(soft));
  for (const double o : shard_objective) result.log_objective += o;
  return result;
}

Parameters maximization_step(const Responsibilities& responsibilities, const Corpus& corpus,
                             const TrainConfig& config) {
  const std::size_t k = responsibilities.k();
  const std::size_t v = corpus.num_beacons();
  const std::size_t n = corpus.num_users();
  if (responsibilities.num_users() != n) fail(ErrorCode::kInvalidArgument, "responsibilities do not match corpus");
  const bool hard = responsibilities.mode() == ClusteringMode::kHard;

  // Sums are count-weighted: row c gets r_jc * n(u_j, b) in column b and
  // r_jc * n(u_j) in column v. Since p(b|u_j) p(u_j) = n(u_j, b) / N, this is
  // the same M-step; in hard mode every addend is an integer, so the sums are
  // exact and independent of the shard count.
  const auto shards = make_shards(n, config.shards);
  const auto table = sharded_table_sum(k, v + 1, shards, config.threads,
                                       [&](std::size_t j, std::size_t lo, std::size_t hi, auto& add) {
    const auto& h = corpus.user(j);
    auto accumulate = [&](std::size_t c, double r) {
      add(c, v, r * static_cast<double>(h.total));
      for (std::size_t e = 0; e < h.size(); ++e) add(c, h.beacons[e], r * static_cast<double>(h.counts[e]));
    };
    if (hard) {
      const std::size_t c = responsibilities.hard_clusters()[j];
      if (c >= lo && c < hi) accumulate(c, 1.0);
    } else {
      const auto row = responsibilities.soft_row(j);
      for (std::size_t c = lo; c < hi; ++c) {
        if (row[c] > 0.0) accumulate(c, row[c]);
      }
    }
  });

  const double total_events = static_cast<double>(corpus.total_events());
  std::vector<double> priors(k);
  std::vector<double> mass(k);
  std::vector<double> joint(k * v);
  for (std::size_t c = 0; c < k; ++c) {
    mass[c] = table[c * (v + 1) + v];
    priors[c] = mass[c] / total_events;
    std::copy_n(&table[c * (v + 1)], v, &joint[c * v]);
  }

  Parameters params;
  params.k = k;
  params.num_beacons = v;
  params.priors = std::move(priors);
  params.beacon_given_cluster = std::move(joint);
  const double uniform = 1.0 / static_cast<double>(v);
  for (std::size_t c = 0; c < k; ++c) {
    double* row = &params.beacon_given_cluster[c * v];
    if (mass[c] == 0.0) {
      std::fill(row, row + v, uniform);
      params.empty_clusters.push_back(static_cast<ClusterIndex>(c));
      continue;
    }
    for (std::size_t b = 0; b < v; ++b) row[b] /= mass[c];
    if (config.smoothing > 0.0) {
      const double norm = 1.0 + config.smoothing * static_cast<double>(v);
      for (std::size_t b = 0; b < v; ++b) row[b] = (row[b] + config.smoothing) / norm;
    }
  }
  return params;
}

namespace {

void check_finite(const Parameters& params, std::size_t iteration) {
  auto bad = [](double x) { return !std::isfinite(x); };
  if (std::any_of(params.priors.begin(), params.priors.end(), bad) ||
      std::any_of(params.beacon_given_cluster.begin(), params.beacon_given_cluster.end(), bad)) {
    fail(ErrorCode::kNumericalFailure, "iteration " + std::to_string(iteration) + ": non-finite parameter");
  }
}

}  // namespace

ClusterModel export_model(const Parameters& params, const Vocabulary& vocabulary) {
  return ClusterModel::from_parameters(vocabulary, params.priors, params.beacon_given_cluster);
}

TrainResult train(const Corpus& corpus, const TrainConfig& config) {
  auto state = init_random(corpus, config);
  check_finite(state.params, 0);
  bool converged = false;
  for (std::size_t iteration = 1; iteration <= config.max_iters; ++iteration) {
    ExpectationResult expectation;
    Parameters next;
    try {
      expectation = expectation_step(state.params, corpus, config);
      next = maximization_step(expectation.responsibilities, corpus, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumericalFailure) throw;
      fail(ErrorCode::kNumericalFailure, "iteration " + std::to_string(iteration) + ": " + e.what());
    }
    check_finite(next, iteration);
    if (!std::isfinite(expectation.log_objective)) {
      fail(ErrorCode::kNumericalFailure, "iteration " + std::to_string(iteration) + ": non-finite objective");
    }
    const double delta = next.max_abs_change(state.params);
    state.trace.push_back({iteration, expectation.log_objective, delta});
    state.params = std::move(next);
    state.responsibilities = std::move(expectation.responsibilities);
    state.iteration = iteration;
    if (delta < config.tol) {
      converged = true;
      break;
    }
  }
  return TrainResult{export_model(state.params, corpus.vocabulary()), std::move(state.params),
                     std::move(state.responsibilities), std::move(state.trace), state.iteration, converged};
}

}  // namespace beaconclust
