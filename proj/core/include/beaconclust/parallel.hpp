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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace beaconclust {

inline constexpr std::size_t kDefaultShards = 64;

struct ShardRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits [0, n) into `shards` contiguous ranges whose sizes differ by at most
/// one. Some ranges are empty when n < shards.
std::vector<ShardRange> make_shards(std::size_t n, std::size_t shards);

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must not
/// share mutable state. The first exception (lowest task index) is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& task);

/// Sums a rows x cols table from per-item contributions. Items are visited
/// shard by shard, and every entry ends up as the ascending-shard sum of its
/// per-shard partial sums. Rows are split among workers, so the result is
/// bitwise identical for any `threads`.
///
/// contribute(item, row_lo, row_hi, add) must only call add(row, col, value)
/// for rows in [row_lo, row_hi).
template <class Contribute>
std::vector<double> sharded_table_sum(std::size_t rows, std::size_t cols, std::span<const ShardRange> shards,
                                      std::size_t threads, Contribute&& contribute) {
  std::vector<double> table(rows * cols, 0.0);
  if (rows == 0 || cols == 0) return table;
  const auto blocks = make_shards(rows, std::min(std::max<std::size_t>(threads, 1), rows));
  parallel_for(blocks.size(), threads, [&](std::size_t blk) {
    const std::size_t lo = blocks[blk].begin;
    const std::size_t hi = blocks[blk].end;
    if (lo == hi) return;
    std::vector<double> partial((hi - lo) * cols, 0.0);
    std::vector<char> mark((hi - lo) * cols, 0);
    std::vector<std::size_t> touched;
    auto add = [&](std::size_t row, std::size_t col, double value) {
      const std::size_t idx = (row - lo) * cols + col;
      if (!mark[idx]) {
        mark[idx] = 1;
        touched.push_back(idx);
      }
      partial[idx] += value;
    };
    for (const auto& shard : shards) {
      for (std::size_t item = shard.begin; item < shard.end; ++item) contribute(item, lo, hi, add);
      // Entries a shard never touched hold +0.0 and would not change the sum.
      for (const auto idx : touched) {
        table[lo * cols + idx] += partial[idx];
        partial[idx] = 0.0;
        mark[idx] = 0;
      }
      touched.clear();
    }
  });
  return table;
}

}  // namespace beaconclust
