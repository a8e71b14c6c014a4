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

#include "beaconclust/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "beaconclust/error.hpp"
#include "beaconclust/random.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust {

EventRecord parse_event(std::string_view line, std::size_t line_number) {
  const std::string where = "event line " + std::to_string(line_number);
  const auto fields = split(line, '\t');
  if (fields.size() != 3) fail(ErrorCode::kMalformedInput, where + ": expected timestamp<TAB>user_id<TAB>beacon_id");
  EventRecord record;
  record.timestamp = parse_int(fields[0], where);
  if (record.timestamp < 0) fail(ErrorCode::kMalformedInput, where + ": negative timestamp");
  if (fields[1].empty()) fail(ErrorCode::kMalformedInput, where + ": empty user id");
  if (fields[2].empty()) fail(ErrorCode::kMalformedInput, where + ": empty beacon id");
  if (fields[2].find(',') != std::string_view::npos) {
    fail(ErrorCode::kMalformedInput, where + ": beacon id may not contain ','");
  }
  record.user = std::string(fields[1]);
  record.beacon = std::string(fields[2]);
  return record;
}

std::string format_event(const EventRecord& event) {
  return std::to_string(event.timestamp) + '\t' + event.user + '\t' + event.beacon;
}

std::vector<EventRecord> read_events(std::istream& in, const ReadOptions& options) {
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      events.push_back(parse_event(line, line_number));
    } catch (const Error& e) {
      if (options.strict) throw;
      if (options.diagnostics) options.diagnostics->push_back(std::string(e.what()) + " (skipped)");
    }
  }
  return events;
}

std::vector<EventRecord> read_events(const std::filesystem::path& path, const ReadOptions& options) {
  auto in = open_input(path);
  return read_events(in, options);
}

void write_events(std::span<const EventRecord> events, std::ostream& out) {
  for (const auto& e : events) out << e.timestamp << '\t' << e.user << '\t' << e.beacon << '\n';
  if (!out) fail(ErrorCode::kIo, "failed writing events");
}

Corpus build_corpus(std::span<const EventRecord> events, int window_days, std::int64_t now) {
  if (window_days < 1) fail(ErrorCode::kInvalidArgument, "window_days must be at least 1");
  const std::int64_t oldest = now - static_cast<std::int64_t>(window_days) * kSecondsPerDay;
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const auto& e : events) {
    if (e.timestamp < oldest || e.timestamp > now) continue;
    ++counts[e.user][e.beacon];
  }
  if (counts.empty()) fail(ErrorCode::kEmptyCorpus, "no events inside the window");
  std::vector<UserHistory> histories;
  histories.reserve(counts.size());
  for (auto& [user, beacons] : counts) histories.push_back(UserHistory::from_counts(user, std::move(beacons)));
  return Corpus::from_user_histories(histories);
}

Corpus filter_beacons(const Corpus& corpus, const FilterOptions& options) {
  if (options.min_users < 1) fail(ErrorCode::kInvalidArgument, "min_users must be at least 1");
  if (!(options.max_user_fraction > 0.0 && options.max_user_fraction <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "max_user_fraction must be in (0, 1]");
  }
  const auto df = corpus.user_frequencies();
  const double max_users = options.max_user_fraction * static_cast<double>(corpus.num_users());
  std::vector<BeaconIndex> kept;
  for (std::size_t b = 0; b < df.size(); ++b) {
    if (df[b] >= options.min_users && static_cast<double>(df[b]) <= max_users) {
      kept.push_back(static_cast<BeaconIndex>(b));
    }
  }
  if (options.sample_size && kept.size() > *options.sample_size) {
    // Partial Fisher-Yates: the first sample_size slots become a uniform sample.
    Rng rng(options.seed);
    for (std::size_t i = 0; i < *options.sample_size; ++i) {
      const auto pick = i + rng.uniform_index(kept.size() - i);
      std::swap(kept[i], kept[pick]);
    }
    kept.resize(*options.sample_size);
    std::sort(kept.begin(), kept.end());
  }
  if (kept.empty()) fail(ErrorCode::kFilterTooAggressive, "no beacons survive filtering");

  std::vector<std::int64_t> remap(corpus.num_beacons(), -1);
  std::vector<std::string> ids;
  ids.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap[kept[i]] = static_cast<std::int64_t>(i);
    ids.push_back(corpus.vocabulary().at(kept[i]));
  }

  std::vector<IndexedHistory> users;
  for (const auto& h : corpus.users()) {
    IndexedHistory row;
    row.user = h.user;
    for (std::size_t e = 0; e < h.size(); ++e) {
      const auto target = remap[h.beacons[e]];
      if (target < 0) continue;
      row.beacons.push_back(static_cast<BeaconIndex>(target));
      row.counts.push_back(h.counts[e]);
      row.total += h.counts[e];
    }
    if (!row.beacons.empty()) users.push_back(std::move(row));
  }
  if (users.empty()) fail(ErrorCode::kFilterTooAggressive, "no users keep any events after filtering");
  return Corpus::from_histories(Vocabulary(std::move(ids)), std::move(users));
}

}  // namespace beaconclust
