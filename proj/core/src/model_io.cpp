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

#include "beaconclust/model_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "beaconclust/error.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust {

namespace {

constexpr std::string_view kMagic = "beaconclust-model";

BeaconIndex lookup(const Vocabulary& vocabulary, std::string_view beacon, const LineReader& reader) {
  const auto index = vocabulary.find(beacon);
  if (!index) reader.error("beacon '" + std::string(beacon) + "' is not in the vocabulary");
  return *index;
}

}  // namespace

void write_model(const ClusterModel& model, std::ostream& out) {
  const std::size_t k = model.k();
  const std::size_t v = model.num_beacons();
  out << kMagic << "\t1\n";
  out << "k\t" << k << '\n';
  out << "vocabulary\t" << v << '\n';
  for (const auto& id : model.vocabulary().ids()) out << id << '\n';
  out << "priors";
  for (const double p : model.priors()) out << '\t' << format_double(p);
  out << '\n';

  std::size_t nonzero = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (const double p : model.beacon_given_cluster(static_cast<ClusterIndex>(c))) nonzero += p != 0.0;
  }
  out << "beacon_given_cluster\t" << nonzero << '\n';
  for (std::size_t c = 0; c < k; ++c) {
    const auto row = model.beacon_given_cluster(static_cast<ClusterIndex>(c));
    for (std::size_t b = 0; b < v; ++b) {
      if (row[b] == 0.0) continue;
      out << c << '\t' << model.vocabulary().at(static_cast<BeaconIndex>(b)) << '\t' << format_double(row[b])
          << '\n';
    }
  }

  nonzero = 0;
  for (std::size_t b = 0; b < v; ++b) {
    for (const double p : model.cluster_given_beacon(static_cast<BeaconIndex>(b))) nonzero += p != 0.0;
  }
  out << "cluster_given_beacon\t" << nonzero << '\n';
  for (std::size_t b = 0; b < v; ++b) {
    const auto row = model.cluster_given_beacon(static_cast<BeaconIndex>(b));
    for (std::size_t c = 0; c < k; ++c) {
      if (row[c] == 0.0) continue;
      out << model.vocabulary().at(static_cast<BeaconIndex>(b)) << '\t' << c << '\t' << format_double(row[c])
          << '\n';
    }
  }
  out << "end\n";
  if (!out) fail(ErrorCode::kIo, "failed writing model");
}

void write_model(const ClusterModel& model, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_model(model, out);
  out.close();
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

ClusterModel read_model(std::istream& in) {
  LineReader reader(in, "model file");
  {
    const auto line = reader.next("header");
    const auto header = split(line, '\t');
    if (header.size() != 2 || header[0] != kMagic) reader.error("not a beaconclust model file");
    if (header[1] != "1") reader.error("unsupported model version '" + std::string(header[1]) + "'");
  }
  const auto k = parse_uint(reader.keyed("k"), reader.where());
  if (k == 0) reader.error("k must be positive");
  const auto v = parse_uint(reader.keyed("vocabulary"), reader.where());
  std::vector<std::string> ids;
  ids.reserve(v);
  for (std::uint64_t i = 0; i < v; ++i) ids.push_back(reader.next("beacon id"));
  Vocabulary vocabulary;
  try {
    vocabulary = Vocabulary(std::move(ids));
  } catch (const Error& e) {
    reader.error(e.what());
  }

  std::vector<double> priors;
  {
    const auto line = reader.next("priors");
    const auto fields = split(line, '\t');
    if (fields[0] != "priors" || fields.size() != k + 1) reader.error("expected 'priors' followed by K values");
    for (std::size_t i = 1; i < fields.size(); ++i) priors.push_back(parse_double(fields[i], reader.where()));
  }

  std::vector<double> beacon_given_cluster(k * v, 0.0);
  const auto n_bgc = parse_uint(reader.keyed("beacon_given_cluster"), reader.where());
  for (std::uint64_t i = 0; i < n_bgc; ++i) {
    const auto line = reader.next("p(b|c) entry");
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.error("expected cluster<TAB>beacon<TAB>probability");
    const auto c = parse_uint(fields[0], reader.where());
    if (c >= k) reader.error("cluster index out of range");
    const auto b = lookup(vocabulary, fields[1], reader);
    beacon_given_cluster[c * v + b] = parse_double(fields[2], reader.where());
  }

  std::vector<double> cluster_given_beacon(k * v, 0.0);
  const auto n_cgb = parse_uint(reader.keyed("cluster_given_beacon"), reader.where());
  for (std::uint64_t i = 0; i < n_cgb; ++i) {
    const auto line = reader.next("p(c|b) entry");
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.error("expected beacon<TAB>cluster<TAB>probability");
    const auto b = lookup(vocabulary, fields[0], reader);
    const auto c = parse_uint(fields[1], reader.where());
    if (c >= k) reader.error("cluster index out of range");
    cluster_given_beacon[b * k + c] = parse_double(fields[2], reader.where());
  }
  if (reader.next("end") != "end") reader.error("expected 'end'");

  return ClusterModel::from_tables(std::move(vocabulary), std::move(priors), std::move(beacon_given_cluster),
                                   std::move(cluster_given_beacon));
}

ClusterModel read_model(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_model(in);
}

}  // namespace beaconclust
