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
#include <stdexcept>

#include "beaconclust/parallel.hpp"
#include "beaconclust/random.hpp"

namespace beaconclust {
namespace {

TEST(Shards, CoverRangeEvenly) {
  for (std::size_t n : {0u, 1u, 7u, 64u, 1000u}) {
    for (std::size_t s : {1u, 3u, 64u}) {
      const auto shards = make_shards(n, s);
      std::size_t next = 0;
      std::size_t lo = n;
      std::size_t hi = 0;
      for (const auto& r : shards) {
        EXPECT_EQ(r.begin, next);
        next = r.end;
        lo = std::min(lo, r.end - r.begin);
        hi = std::max(hi, r.end - r.begin);
      }
      EXPECT_EQ(next, n);
      if (!shards.empty()) EXPECT_LE(hi - lo, 1u);
    }
  }
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  try {
    parallel_for(20, 4, [](std::size_t i) {
      if (i == 7 || i == 13) throw std::runtime_error("task " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "task 7");
  }
}

TEST(ShardedTableSum, IndependentOfThreadCount) {
  std::mt19937_64 gen(1);
  std::vector<double> values(5000);
  for (auto& x : values) x = std::uniform_real_distribution<double>(-1e3, 1e3)(gen);
  const auto shards = make_shards(values.size(), 64);
  auto run = [&](std::size_t threads) {
    return sharded_table_sum(7, 3, shards, threads, [&](std::size_t item, std::size_t lo, std::size_t hi, auto& add) {
      const std::size_t row = item % 7;
      if (row >= lo && row < hi) add(row, item % 3, values[item]);
    });
  };
  const auto one = run(1);
  for (std::size_t threads : {2u, 3u, 8u}) EXPECT_EQ(run(threads), one);
}

TEST(Rng, UniformIndexMatchesReferenceRejection) {
  Rng rng(99);
  std::mt19937_64 ref(99);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t bound = 1 + static_cast<std::uint64_t>(i) * 7919;
    const std::uint64_t max = ~std::uint64_t{0};
    const std::uint64_t excess = (max % bound + 1) % bound;
    std::uint64_t r;
    do {
      r = ref();
    } while (r > max - excess);
    EXPECT_EQ(rng.uniform_index(bound), r % bound);
  }
}

TEST(Rng, GammaMeanIsShape) {
  Rng rng(4);
  for (double shape : {0.1, 1.0, 3.5}) {
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape);
    EXPECT_NEAR(sum / n, shape, 0.02 * std::max(1.0, shape));
  }
}

}  // namespace
}  // namespace beaconclust
