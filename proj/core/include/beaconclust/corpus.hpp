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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beaconclust/history.hpp"
#include "beaconclust/vocabulary.hpp"

namespace beaconclust {

/// One user's counts keyed by corpus vocabulary index, sorted by index.
struct IndexedHistory {
  std::string user;
  std::vector<BeaconIndex> beacons;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::size_t size() const { return beacons.size(); }
  /// p(b|u) for the i-th stored entry.
  double probability(std::size_t entry) const {
    return static_cast<double>(counts[entry]) / static_cast<double>(total);
  }

  friend bool operator==(const IndexedHistory&, const IndexedHistory&) = default;
};

/// Preprocessed training set: user histories sorted by user id, the user
/// marginals p(u) = n(u) / sum n, and the empirical beacon marginals
/// p(b) = sum_u n(u,b) / sum n.
class Corpus {
 public:
  Corpus() = default;

  /// Validates the histories against the vocabulary and computes marginals.
  /// Users are re-sorted by id.
  static Corpus from_histories(Vocabulary vocabulary, std::vector<IndexedHistory> users);

  /// Builds the vocabulary as the sorted union of beacons in `histories`.
  static Corpus from_user_histories(std::span<const UserHistory> histories);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::span<const IndexedHistory> users() const { return users_; }
  const IndexedHistory& user(std::size_t j) const { return users_[j]; }
  std::span<const double> user_marginals() const { return user_marginals_; }
  std::span<const double> beacon_marginals() const { return beacon_marginals_; }
  std::size_t num_users() const { return users_.size(); }
  std::size_t num_beacons() const { return vocabulary_.size(); }
  std::uint64_t total_events() const { return total_events_; }

  /// Distinct users that fired each beacon.
  std::vector<std::uint64_t> user_frequencies() const;

  UserHistory history(std::size_t j) const;
  std::vector<UserHistory> histories() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  Vocabulary vocabulary_;
  std::vector<IndexedHistory> users_;
  std::vector<double> user_marginals_;
  std::vector<double> beacon_marginals_;
  std::uint64_t total_events_ = 0;
};

// Corpus text format: an optional header line "#beaconclust-corpus", then one
// row per user (blank lines are ignored):
//
//   user_id<TAB>total<TAB>beacon:count,beacon:count,...
//
// Beacon ids may not contain ',' and are split from the count at the last ':'.
// The vocabulary is the sorted union of beacons over all rows.

void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::vector<UserHistory> read_histories(std::istream& in);
std::vector<UserHistory> read_histories(const std::filesystem::path& path);
Corpus read_corpus(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);

}  // namespace beaconclust
