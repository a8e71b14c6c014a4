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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beaconclust/cluster_model.hpp"
#include "beaconclust/corpus.hpp"
#include "beaconclust/parallel.hpp"

namespace beaconclust {

// Classic pLSA with users as documents and beacons as words. Kept as a
// comparison clusterer: it stores p(c|d) for every training user and so
// cannot place a user it was not trained on.

struct PlsaConfig {
  std::size_t k = 600;
  std::size_t max_iters = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t shards = kDefaultShards;
  std::size_t threads = 1;

  void validate() const;
};

struct PlsaModel {
  std::size_t k = 0;
  Vocabulary vocabulary;
  std::vector<std::string> users;
  /// p(w|c), K x V row-major.
  std::vector<double> word_given_cluster;
  /// p(c|d), D x K row-major, D = users.size().
  std::vector<double> cluster_given_doc;

  std::span<const double> word_row(ClusterIndex cluster) const {
    return std::span<const double>(word_given_cluster).subspan(cluster * vocabulary.size(), vocabulary.size());
  }
  std::span<const double> doc_row(std::size_t doc) const {
    return std::span<const double>(cluster_given_doc).subspan(doc * k, k);
  }

  void validate() const;
  double max_abs_change(const PlsaModel& other) const;

  friend bool operator==(const PlsaModel&, const PlsaModel&) = default;
};

/// p(c|d,w) for every observed (document, word) pair, laid out in corpus
/// entry order: entry e of user j lives at (offsets[j] + e) * k.
struct PlsaPosteriors {
  std::size_t k = 0;
  std::vector<std::size_t> offsets;
  std::vector<double> values;

  std::span<const double> at(std::size_t user, std::size_t entry) const {
    return std::span<const double>(values).subspan((offsets[user] + entry) * k, k);
  }
};

/// Seeded strictly positive tables, each row normalized.
PlsaModel plsa_init(const Corpus& corpus, const PlsaConfig& config);

/// p(c_i|d_j,w_k) = p(w_k|c_i) p(c_i|d_j) / sum_m p(w_k|c_m) p(c_m|d_j)
PlsaPosteriors plsa_e_step(const PlsaModel& model, const Corpus& corpus, const PlsaConfig& config);

/// p(w_k|c_i) proportional to sum_j n(d_j,w_k) p(c_i|d_j,w_k);
/// p(c_i|d_j) = sum_k n(d_j,w_k) p(c_i|d_j,w_k) / n(d_j).
PlsaModel plsa_m_step(const PlsaPosteriors& posteriors, const Corpus& corpus,
                      const PlsaConfig& config);

/// sum_{j,k} n(d_j,w_k) log sum_i p(w_k|c_i) p(c_i|d_j)
double plsa_log_likelihood(const PlsaModel& model, const Corpus& corpus);

struct PlsaIterationStats {
  std::size_t iteration = 0;
  double log_likelihood = 0.0;
  double max_param_delta = 0.0;
};

struct PlsaTrainResult {
  PlsaModel model;
  std::vector<PlsaIterationStats> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

PlsaTrainResult plsa_train(const Corpus& corpus, const PlsaConfig& config);

/// Looks the user up in the stored p(c|d) table. Users absent from training
/// raise kUnseenUser: pLSA would have to be retrained to place them.
Assignment plsa_assign(const PlsaModel& model, std::string_view user);

// pLSA model file, same conventions as the cluster model file:
//
//   beaconclust-plsa<TAB>1
//   k<TAB><K>
//   vocabulary<TAB><V>          then V beacon ids
//   users<TAB><D>               then D user ids
//   word_given_cluster<TAB><N>  then <cluster><TAB><beacon><TAB><p> lines
//   cluster_given_doc<TAB><M>   then <user><TAB><cluster><TAB><p> lines
//   end

void write_plsa_model(const PlsaModel& model, std::ostream& out);
void write_plsa_model(const PlsaModel& model, const std::filesystem::path& path);
PlsaModel read_plsa_model(std::istream& in);
PlsaModel read_plsa_model(const std::filesystem::path& path);

}  // namespace beaconclust
