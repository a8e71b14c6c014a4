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

#include "beaconclust/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "beaconclust/error.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust {

namespace {

constexpr std::string_view kCorpusHeader = "#beaconclust-corpus";

}  // namespace

Corpus Corpus::from_histories(Vocabulary vocabulary, std::vector<IndexedHistory> users) {
  if (users.empty()) fail(ErrorCode::kEmptyCorpus, "corpus has no users");
  std::sort(users.begin(), users.end(),
            [](const IndexedHistory& a, const IndexedHistory& b) { return a.user < b.user; });

  Corpus corpus;
  corpus.vocabulary_ = std::move(vocabulary);
  const std::size_t v = corpus.vocabulary_.size();
  std::vector<std::uint64_t> beacon_totals(v, 0);
  for (std::size_t j = 0; j < users.size(); ++j) {
    const auto& h = users[j];
    if (j > 0 && users[j - 1].user == h.user) fail(ErrorCode::kInvalidArgument, "duplicate user '" + h.user + "'");
    if (h.beacons.size() != h.counts.size()) fail(ErrorCode::kInvalidArgument, "history arrays differ in length");
    if (h.beacons.empty()) fail(ErrorCode::kEmptyHistory, "user '" + h.user + "' has no events");
    std::uint64_t total = 0;
    for (std::size_t e = 0; e < h.size(); ++e) {
      if (h.beacons[e] >= v) fail(ErrorCode::kInvalidArgument, "user '" + h.user + "' references unknown beacon");
      if (e > 0 && h.beacons[e] <= h.beacons[e - 1]) {
        fail(ErrorCode::kInvalidArgument, "user '" + h.user + "' beacons must be strictly increasing");
      }
      if (h.counts[e] == 0) fail(ErrorCode::kInvalidArgument, "user '" + h.user + "' has a zero count");
      total += h.counts[e];
      beacon_totals[h.beacons[e]] += h.counts[e];
    }
    if (total != h.total) fail(ErrorCode::kInvalidArgument, "user '" + h.user + "' total does not match counts");
    corpus.total_events_ += total;
  }
  for (std::size_t b = 0; b < v; ++b) {
    if (beacon_totals[b] == 0) {
      fail(ErrorCode::kInvalidArgument, "beacon '" + corpus.vocabulary_.at(static_cast<BeaconIndex>(b)) +
                                            "' never occurs in the corpus");
    }
  }

  const double n = static_cast<double>(corpus.total_events_);
  corpus.user_marginals_.reserve(users.size());
  for (const auto& h : users) corpus.user_marginals_.push_back(static_cast<double>(h.total) / n);
  corpus.beacon_marginals_.reserve(v);
  for (const auto t : beacon_totals) corpus.beacon_marginals_.push_back(static_cast<double>(t) / n);
  corpus.users_ = std::move(users);
  return corpus;
}

Corpus Corpus::from_user_histories(std::span<const UserHistory> histories) {
  std::set<std::string> beacons;
  for (const auto& h : histories) {
    for (const auto& [b, n] : h.counts) beacons.insert(b);
  }
  Vocabulary vocabulary(std::vector<std::string>(beacons.begin(), beacons.end()));
  std::vector<IndexedHistory> users;
  users.reserve(histories.size());
  for (const auto& h : histories) {
    IndexedHistory row;
    row.user = h.user;
    row.total = h.total;
    // std::map iterates in id order, which matches vocabulary index order.
    for (const auto& [b, n] : h.counts) {
      row.beacons.push_back(*vocabulary.find(b));
      row.counts.push_back(n);
    }
    users.push_back(std::move(row));
  }
  return from_histories(std::move(vocabulary), std::move(users));
}

std::vector<std::uint64_t> Corpus::user_frequencies() const {
  std::vector<std::uint64_t> df(num_beacons(), 0);
  for (const auto& h : users_) {
    for (const auto b : h.beacons) ++df[b];
  }
  return df;
}

UserHistory Corpus::history(std::size_t j) const {
  const auto& h = users_.at(j);
  UserHistory out;
  out.user = h.user;
  out.total = h.total;
  for (std::size_t e = 0; e < h.size(); ++e) out.counts.emplace(vocabulary_.at(h.beacons[e]), h.counts[e]);
  return out;
}

std::vector<UserHistory> Corpus::histories() const {
  std::vector<UserHistory> out;
  out.reserve(users_.size());
  for (std::size_t j = 0; j < users_.size(); ++j) out.push_back(history(j));
  return out;
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  out << kCorpusHeader << '\n';
  for (const auto& h : corpus.users()) {
    out << h.user << '\t' << h.total << '\t';
    for (std::size_t e = 0; e < h.size(); ++e) {
      if (e > 0) out << ',';
      out << corpus.vocabulary().at(h.beacons[e]) << ':' << h.counts[e];
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing corpus");
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_corpus(corpus, out);
}

std::vector<UserHistory> read_histories(std::istream& in) {
  std::vector<UserHistory> histories;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == kCorpusHeader) continue;
    const std::string where = "corpus line " + std::to_string(line_number);
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      fail(ErrorCode::kMalformedInput, where + ": expected user_id<TAB>total<TAB>beacon:count,...");
    }
    if (fields[0].empty()) fail(ErrorCode::kMalformedInput, where + ": empty user id");
    const auto total = parse_uint(fields[1], where);
    std::map<std::string, std::uint64_t> counts;
    for (const auto item : split(fields[2], ',')) {
      const auto colon = item.rfind(':');
      if (colon == std::string_view::npos || colon == 0) {
        fail(ErrorCode::kMalformedInput, where + ": expected beacon:count, got '" + std::string(item) + "'");
      }
      const auto count = parse_uint(item.substr(colon + 1), where);
      if (count == 0) fail(ErrorCode::kMalformedInput, where + ": zero count");
      if (!counts.emplace(std::string(item.substr(0, colon)), count).second) {
        fail(ErrorCode::kMalformedInput, where + ": beacon listed twice");
      }
    }
    auto history = UserHistory::from_counts(std::string(fields[0]), std::move(counts));
    if (history.total != total) fail(ErrorCode::kMalformedInput, where + ": total does not match the counts");
    if (!seen.insert(history.user).second) {
      fail(ErrorCode::kMalformedInput, where + ": duplicate user '" + history.user + "'");
    }
    histories.push_back(std::move(history));
  }
  return histories;
}

std::vector<UserHistory> read_histories(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_histories(in);
}

Corpus read_corpus(std::istream& in) {
  const auto histories = read_histories(in);
  return Corpus::from_user_histories(histories);
}

Corpus read_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus(in);
}

}  // namespace beaconclust
