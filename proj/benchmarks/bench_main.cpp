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

#include <benchmark/benchmark.h>

#include <map>

#include "beaconclust/em_trainer.hpp"
#include "beaconclust/ingest.hpp"
#include "beaconclust/kmeans.hpp"
#include "beaconclust/plsa.hpp"
#include "beaconclust/synthgen.hpp"

namespace bc = beaconclust;

namespace {

const bc::Corpus& corpus(std::size_t users) {
  static std::map<std::size_t, bc::Corpus> cache;
  auto it = cache.find(users);
  if (it == cache.end()) {
    bc::SynthConfig sc;
    sc.k_true = 20;
    sc.n_users = users;
    sc.n_beacons = 500;
    sc.overlap = bc::Overlap::kDirichlet;
    sc.alpha = 0.1;
    sc.seed = 1;
    const auto data = bc::generate(sc);
    it = cache.emplace(users, bc::build_corpus(data.events, sc.window_days, sc.now)).first;
  }
  return it->second;
}

bc::TrainConfig train_config(const benchmark::State& state) {
  bc::TrainConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(1));
  cfg.threads = static_cast<std::size_t>(state.range(2));
  cfg.seed = 1;
  return cfg;
}

void BM_ExpectationStep(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  const auto cfg = train_config(state);
  const auto init = bc::init_random(c, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(bc::expectation_step(init.params, c, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.num_users()));
}
BENCHMARK(BM_ExpectationStep)->Args({10000, 20, 1})->Args({10000, 200, 1})->Args({10000, 200, 4})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MaximizationStep(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  const auto cfg = train_config(state);
  const auto init = bc::init_random(c, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(bc::maximization_step(init.responsibilities, c, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.num_users()));
}
BENCHMARK(BM_MaximizationStep)->Args({10000, 20, 1})->Args({10000, 200, 1})->Args({10000, 200, 4})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ScoreUser(benchmark::State& state) {
  const auto& c = corpus(10000);
  bc::TrainConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(0));
  cfg.max_iters = 5;
  cfg.seed = 1;
  const auto model = bc::train(c, cfg).model;
  const auto histories = c.histories();
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bc::score_user(model, histories[j]));
    j = (j + 1) % histories.size();
  }
}
BENCHMARK(BM_ScoreUser)->Arg(20)->Arg(200);

void BM_PlsaIteration(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  bc::PlsaConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(1));
  cfg.seed = 1;
  const auto model = bc::plsa_init(c, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(bc::plsa_m_step(bc::plsa_e_step(model, c, cfg), c, cfg));
}
BENCHMARK(BM_PlsaIteration)->Args({10000, 20})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_KMeans(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  bc::KMeansConfig cfg;
  cfg.max_rounds = 10;
  for (auto _ : state) benchmark::DoNotOptimize(bc::kmeans_cluster(c, cfg));
}
BENCHMARK(BM_KMeans)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
