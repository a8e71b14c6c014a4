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

#include "beaconclust/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "beaconclust/error.hpp"
#include "beaconclust/parallel.hpp"
#include "beaconclust/random.hpp"

namespace beaconclust {

void SynthConfig::validate() const {
  if (k_true < 1) fail(ErrorCode::kInvalidArgument, "k_true must be at least 1");
  if (n_users < 1) fail(ErrorCode::kInvalidArgument, "n_users must be at least 1");
  if (n_beacons < k_true) fail(ErrorCode::kInvalidArgument, "n_beacons must be at least k_true");
  if (min_events < 1 || max_events < min_events) {
    fail(ErrorCode::kInvalidArgument, "events per user must satisfy 1 <= min <= max");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::kInvalidArgument, "alpha must be positive");
  if (window_days < 1) fail(ErrorCode::kInvalidArgument, "window_days must be at least 1");
  if (now < static_cast<std::int64_t>(window_days) * kSecondsPerDay) {
    fail(ErrorCode::kInvalidArgument, "now must be at least one window after the epoch");
  }
}

std::map<std::string, std::int64_t> PlantedTruth::label_map() const {
  std::map<std::string, std::int64_t> out;
  for (std::size_t j = 0; j < users.size(); ++j) out.emplace(users[j], labels[j]);
  return out;
}

namespace {

std::string padded(char prefix, std::size_t index, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t x = count > 0 ? count - 1 : 0; x >= 10; x /= 10) ++width;
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> cdf(p.size());
  double running = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    running += p[i];
    cdf[i] = running;
  }
  return cdf;
}

std::size_t sample(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform01() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

std::string beacon_name(std::size_t index, std::size_t count) { return padded('b', index, count); }
std::string user_name(std::size_t index, std::size_t count) { return padded('u', index, count); }

SynthData generate(const SynthConfig& config) {
  config.validate();
  const std::size_t k = config.k_true;
  const std::size_t v = config.n_beacons;
  Rng rng(config.seed);

  PlantedTruth truth;
  truth.k_true = k;
  truth.priors.assign(k, 1.0 / static_cast<double>(k));
  truth.beacon_given_cluster.assign(k * v, 0.0);
  if (config.overlap == Overlap::kDisjoint) {
    const auto blocks = make_shards(v, k);
    for (std::size_t c = 0; c < k; ++c) {
      const double p = 1.0 / static_cast<double>(blocks[c].end - blocks[c].begin);
      for (std::size_t b = blocks[c].begin; b < blocks[c].end; ++b) truth.beacon_given_cluster[c * v + b] = p;
    }
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      double* row = &truth.beacon_given_cluster[c * v];
      double sum = 0.0;
      while (!(sum > 0.0)) {
        sum = 0.0;
        for (std::size_t b = 0; b < v; ++b) {
          row[b] = rng.gamma(config.alpha);
          sum += row[b];
        }
      }
      for (std::size_t b = 0; b < v; ++b) row[b] /= sum;
    }
  }
  for (std::size_t b = 0; b < v; ++b) truth.beacons.push_back(beacon_name(b, v));

  const auto prior_cdf = cumulative(truth.priors);
  std::vector<std::vector<double>> beacon_cdf;
  for (std::size_t c = 0; c < k; ++c) {
    beacon_cdf.push_back(cumulative(std::span<const double>(truth.beacon_given_cluster).subspan(c * v, v)));
  }

  SynthData data;
  const std::uint64_t window = static_cast<std::uint64_t>(config.window_days) * kSecondsPerDay;
  for (std::size_t j = 0; j < config.n_users; ++j) {
    const auto label = static_cast<std::uint32_t>(sample(prior_cdf, rng));
    const auto user = user_name(j, config.n_users);
    truth.users.push_back(user);
    truth.labels.push_back(label);
    const auto events = config.min_events + rng.uniform_index(config.max_events - config.min_events + 1);
    for (std::uint64_t e = 0; e < events; ++e) {
      const auto beacon = sample(beacon_cdf[label], rng);
      const auto timestamp = config.now - static_cast<std::int64_t>(rng.uniform_index(window));
      data.events.push_back({timestamp, user, truth.beacons[beacon]});
    }
  }
  data.truth = std::move(truth);
  return data;
}

}  // namespace beaconclust
