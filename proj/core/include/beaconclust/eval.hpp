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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beaconclust {

/// user id -> cluster label, as read from an assignments TSV.
using Labeling = std::map<std::string, std::int64_t>;

// Assignments TSV: one `user_id<TAB>cluster_id` row per user; extra columns
// (posterior weights) are ignored on read.
Labeling read_labeling(std::istream& in);
Labeling read_labeling(const std::filesystem::path& path);
void write_labeling(const Labeling& labels, std::ostream& out);

struct RecoveryMetrics {
  double ari = 0.0;
  double purity = 0.0;
  double nmi = 0.0;
};

RecoveryMetrics recovery_metrics(std::span<const std::int64_t> predicted,
                                 std::span<const std::int64_t> truth);
/// Throws kUserSetMismatch unless both labelings cover the same users.
RecoveryMetrics recovery_metrics(const Labeling& predicted, const Labeling& truth);

double adjusted_rand_index(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Cost per action; absent when there were no actions.
std::optional<double> ecpa(double cost, std::uint64_t actions);
/// Cost per click; absent when there were no clicks.
std::optional<double> ecpc(double cost, std::uint64_t clicks);

struct TraceRow {
  std::size_t iteration = 0;
  double value = 0.0;
  double max_param_delta = 0.0;
};

struct Trace {
  std::string name;
  std::string value_column;
  std::vector<TraceRow> rows;
};

// Trace CSV: header `iter,<value column>,max_param_delta`, then one row per
// iteration.
Trace read_trace(std::istream& in, std::string name);
Trace read_trace(const std::filesystem::path& path);
void write_trace(const Trace& trace, std::ostream& out);

/// Side-by-side CSV of several traces keyed by row position. Each trace
/// contributes value, delta and a monotone flag (value did not drop by more
/// than 1e-9); shorter traces are padded with empty cells.
void objective_report(std::span<const Trace> traces, std::ostream& out);

}  // namespace beaconclust
