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

#include "beaconclust/plsa.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "beaconclust/error.hpp"
#include "beaconclust/random.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust {

void PlsaConfig::validate() const {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (max_iters < 1) fail(ErrorCode::kInvalidArgument, "max_iters must be at least 1");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  if (shards < 1) fail(ErrorCode::kInvalidArgument, "shards must be at least 1");
  if (threads < 1) fail(ErrorCode::kInvalidArgument, "threads must be at least 1");
}

namespace {

void check_rows(std::span<const double> table, std::size_t width, const std::string& what) {
  for (std::size_t r = 0; r * width < table.size(); ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      const double x = table[r * width + i];
      if (!std::isfinite(x) || x < 0.0) fail(ErrorCode::kInvariantViolation, what + " has an invalid entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      fail(ErrorCode::kInvariantViolation, what + " row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
}

void fill_random_rows(std::vector<double>& table, std::size_t width, Rng& rng) {
  for (std::size_t r = 0; r * width < table.size(); ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      table[r * width + i] = 0.5 + rng.uniform01();
      sum += table[r * width + i];
    }
    for (std::size_t i = 0; i < width; ++i) table[r * width + i] /= sum;
  }
}

std::vector<std::string> user_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.num_users());
  for (const auto& h : corpus.users()) ids.push_back(h.user);
  return ids;
}

}  // namespace

void PlsaModel::validate() const {
  if (k == 0) fail(ErrorCode::kInvariantViolation, "pLSA model needs at least one cluster");
  if (word_given_cluster.size() != k * vocabulary.size() || cluster_given_doc.size() != users.size() * k) {
    fail(ErrorCode::kInvariantViolation, "pLSA tables have the wrong shape");
  }
  check_rows(word_given_cluster, vocabulary.size(), "p(w|c)");
  check_rows(cluster_given_doc, k, "p(c|d)");
}

double PlsaModel::max_abs_change(const PlsaModel& other) const {
  if (word_given_cluster.size() != other.word_given_cluster.size() ||
      cluster_given_doc.size() != other.cluster_given_doc.size()) {
    fail(ErrorCode::kInvalidArgument, "pLSA models differ in shape");
  }
  double delta = 0.0;
  for (std::size_t i = 0; i < word_given_cluster.size(); ++i) {
    delta = std::max(delta, std::abs(word_given_cluster[i] - other.word_given_cluster[i]));
  }
  for (std::size_t i = 0; i < cluster_given_doc.size(); ++i) {
    delta = std::max(delta, std::abs(cluster_given_doc[i] - other.cluster_given_doc[i]));
  }
  return delta;
}

PlsaModel plsa_init(const Corpus& corpus, const PlsaConfig& config) {
  config.validate();
  PlsaModel model;
  model.k = config.k;
  model.vocabulary = corpus.vocabulary();
  model.users = user_ids(corpus);
  model.word_given_cluster.resize(config.k * corpus.num_beacons());
  model.cluster_given_doc.resize(corpus.num_users() * config.k);
  Rng rng(config.seed);
  fill_random_rows(model.word_given_cluster, corpus.num_beacons(), rng);
  fill_random_rows(model.cluster_given_doc, config.k, rng);
  return model;
}

PlsaPosteriors plsa_e_step(const PlsaModel& model, const Corpus& corpus, const PlsaConfig& config) {
  const std::size_t k = model.k;
  const std::size_t v = corpus.num_beacons();
  if (model.vocabulary.size() != v || model.users.size() != corpus.num_users()) {
    fail(ErrorCode::kInvalidArgument, "pLSA model does not match the corpus");
  }
  PlsaPosteriors post;
  post.k = k;
  post.offsets.resize(corpus.num_users());
  std::size_t entries = 0;
  for (std::size_t j = 0; j < corpus.num_users(); ++j) {
    post.offsets[j] = entries;
    entries += corpus.user(j).size();
  }
  post.values.resize(entries * k);

  const auto shards = make_shards(corpus.num_users(), config.shards);
  parallel_for(shards.size(), config.threads, [&](std::size_t s) {
    for (std::size_t j = shards[s].begin; j < shards[s].end; ++j) {
      const auto& h = corpus.user(j);
      const auto doc = model.doc_row(j);
      for (std::size_t e = 0; e < h.size(); ++e) {
        double* out = &post.values[(post.offsets[j] + e) * k];
        double norm = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          out[c] = model.word_given_cluster[c * v + h.beacons[e]] * doc[c];
          norm += out[c];
        }
        if (!(norm > 0.0) || !std::isfinite(norm)) {
          fail(ErrorCode::kNumericalFailure, "zero pLSA denominator for user '" + h.user + "'");
        }
        for (std::size_t c = 0; c < k; ++c) out[c] /= norm;
      }
    }
  });
  return post;
}

PlsaModel plsa_m_step(const PlsaPosteriors& posteriors, const Corpus& corpus, const PlsaConfig& config) {
  const std::size_t k = posteriors.k;
  const std::size_t v = corpus.num_beacons();
  const std::size_t n = corpus.num_users();
  if (posteriors.offsets.size() != n) fail(ErrorCode::kInvalidArgument, "posteriors do not match the corpus");

  PlsaModel model;
  model.k = k;
  model.vocabulary = corpus.vocabulary();
  model.users = user_ids(corpus);

  const auto shards = make_shards(n, config.shards);
  model.word_given_cluster = sharded_table_sum(k, v, shards, config.threads,
                                               [&](std::size_t j, std::size_t lo, std::size_t hi, auto& add) {
    const auto& h = corpus.user(j);
    for (std::size_t e = 0; e < h.size(); ++e) {
      const auto post = posteriors.at(j, e);
      const double count = static_cast<double>(h.counts[e]);
      for (std::size_t c = lo; c < hi; ++c) add(c, h.beacons[e], count * post[c]);
    }
  });
  const double uniform = 1.0 / static_cast<double>(v);
  for (std::size_t c = 0; c < k; ++c) {
    double* row = &model.word_given_cluster[c * v];
    double norm = 0.0;
    for (std::size_t w = 0; w < v; ++w) norm += row[w];
    if (norm > 0.0) {
      for (std::size_t w = 0; w < v; ++w) row[w] /= norm;
    } else {
      std::fill(row, row + v, uniform);
    }
  }

  model.cluster_given_doc.assign(n * k, 0.0);
  parallel_for(shards.size(), config.threads, [&](std::size_t s) {
    for (std::size_t j = shards[s].begin; j < shards[s].end; ++j) {
      const auto& h = corpus.user(j);
      double* out = &model.cluster_given_doc[j * k];
      for (std::size_t e = 0; e < h.size(); ++e) {
        const auto post = posteriors.at(j, e);
        const double count = static_cast<double>(h.counts[e]);
        for (std::size_t c = 0; c < k; ++c) out[c] += count * post[c];
      }
      const double total = static_cast<double>(h.total);
      for (std::size_t c = 0; c < k; ++c) out[c] /= total;
    }
  });
  return model;
}

double plsa_log_likelihood(const PlsaModel& model, const Corpus& corpus) {
  const std::size_t k = model.k;
  const std::size_t v = corpus.num_beacons();
  double total = 0.0;
  for (std::size_t j = 0; j < corpus.num_users(); ++j) {
    const auto& h = corpus.user(j);
    const auto doc = model.doc_row(j);
    for (std::size_t e = 0; e < h.size(); ++e) {
      double p = 0.0;
      for (std::size_t c = 0; c < k; ++c) p += model.word_given_cluster[c * v + h.beacons[e]] * doc[c];
      total += static_cast<double>(h.counts[e]) * std::log(p);
    }
  }
  return total;
}

PlsaTrainResult plsa_train(const Corpus& corpus, const PlsaConfig& config) {
  PlsaTrainResult result{plsa_init(corpus, config), {}, 0, false};
  for (std::size_t iteration = 1; iteration <= config.max_iters; ++iteration) {
    PlsaModel next;
    try {
      next = plsa_m_step(plsa_e_step(result.model, corpus, config), corpus, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumericalFailure) throw;
      fail(ErrorCode::kNumericalFailure, "iteration " + std::to_string(iteration) + ": " + e.what());
    }
    const double likelihood = plsa_log_likelihood(next, corpus);
    const double delta = next.max_abs_change(result.model);
    if (!std::isfinite(likelihood) || !std::isfinite(delta)) {
      fail(ErrorCode::kNumericalFailure, "iteration " + std::to_string(iteration) + ": non-finite value");
    }
    result.trace.push_back({iteration, likelihood, delta});
    result.model = std::move(next);
    result.iterations = iteration;
    if (delta < config.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Assignment plsa_assign(const PlsaModel& model, std::string_view user) {
  const auto it = std::lower_bound(model.users.begin(), model.users.end(), user);
  if (it == model.users.end() || *it != user) {
    fail(ErrorCode::kUnseenUser, "user '" + std::string(user) +
                                     "' was not in the pLSA training set; pLSA must be retrained to place it");
  }
  const auto row = model.doc_row(static_cast<std::size_t>(it - model.users.begin()));
  Assignment a;
  a.user = std::string(user);
  a.cluster = argmax(row);
  a.posterior = std::vector<double>(row.begin(), row.end());
  return a;
}

namespace {

constexpr std::string_view kPlsaMagic = "beaconclust-plsa";

}  // namespace

void write_plsa_model(const PlsaModel& model, std::ostream& out) {
  const std::size_t k = model.k;
  const std::size_t v = model.vocabulary.size();
  out << kPlsaMagic << "\t1\n";
  out << "k\t" << k << '\n';
  out << "vocabulary\t" << v << '\n';
  for (const auto& id : model.vocabulary.ids()) out << id << '\n';
  out << "users\t" << model.users.size() << '\n';
  for (const auto& id : model.users) out << id << '\n';
  const auto nonzero = [](const std::vector<double>& t) {
    return std::count_if(t.begin(), t.end(), [](double x) { return x != 0.0; });
  };
  out << "word_given_cluster\t" << nonzero(model.word_given_cluster) << '\n';
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t w = 0; w < v; ++w) {
      const double p = model.word_given_cluster[c * v + w];
      if (p != 0.0) out << c << '\t' << model.vocabulary.at(static_cast<BeaconIndex>(w)) << '\t' << format_double(p) << '\n';
    }
  }
  out << "cluster_given_doc\t" << nonzero(model.cluster_given_doc) << '\n';
  for (std::size_t d = 0; d < model.users.size(); ++d) {
    for (std::size_t c = 0; c < k; ++c) {
      const double p = model.cluster_given_doc[d * k + c];
      if (p != 0.0) out << model.users[d] << '\t' << c << '\t' << format_double(p) << '\n';
    }
  }
  out << "end\n";
  if (!out) fail(ErrorCode::kIo, "failed writing pLSA model");
}

void write_plsa_model(const PlsaModel& model, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_plsa_model(model, out);
  out.close();
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

PlsaModel read_plsa_model(std::istream& in) {
  LineReader reader(in, "pLSA model file");
  const auto header_line = reader.next("header");
  const auto header = split(header_line, '\t');
  if (header.size() != 2 || header[0] != kPlsaMagic) reader.error("not a beaconclust pLSA model file");
  if (header[1] != "1") reader.error("unsupported pLSA model version");

  PlsaModel model;
  model.k = parse_uint(reader.keyed("k"), reader.where());
  if (model.k == 0) reader.error("k must be positive");
  const auto v = parse_uint(reader.keyed("vocabulary"), reader.where());
  std::vector<std::string> ids;
  for (std::uint64_t i = 0; i < v; ++i) ids.push_back(reader.next("beacon id"));
  model.vocabulary = Vocabulary(std::move(ids));
  const auto d = parse_uint(reader.keyed("users"), reader.where());
  for (std::uint64_t i = 0; i < d; ++i) model.users.push_back(reader.next("user id"));
  if (!std::is_sorted(model.users.begin(), model.users.end()) ||
      std::adjacent_find(model.users.begin(), model.users.end()) != model.users.end()) {
    reader.error("user ids must be sorted and unique");
  }

  model.word_given_cluster.assign(model.k * v, 0.0);
  const auto n_words = parse_uint(reader.keyed("word_given_cluster"), reader.where());
  for (std::uint64_t i = 0; i < n_words; ++i) {
    const auto line = reader.next("p(w|c) entry");
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.error("expected cluster<TAB>beacon<TAB>probability");
    const auto c = parse_uint(fields[0], reader.where());
    const auto w = model.vocabulary.find(fields[1]);
    if (c >= model.k || !w) reader.error("entry out of range");
    model.word_given_cluster[c * v + *w] = parse_double(fields[2], reader.where());
  }
  model.cluster_given_doc.assign(d * model.k, 0.0);
  const auto n_docs = parse_uint(reader.keyed("cluster_given_doc"), reader.where());
  for (std::uint64_t i = 0; i < n_docs; ++i) {
    const auto line = reader.next("p(c|d) entry");
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.error("expected user<TAB>cluster<TAB>probability");
    const auto it = std::lower_bound(model.users.begin(), model.users.end(), fields[0]);
    const auto c = parse_uint(fields[1], reader.where());
    if (it == model.users.end() || *it != fields[0] || c >= model.k) reader.error("entry out of range");
    model.cluster_given_doc[static_cast<std::size_t>(it - model.users.begin()) * model.k + c] =
        parse_double(fields[2], reader.where());
  }
  if (reader.next("end") != "end") reader.error("expected 'end'");
  model.validate();
  return model;
}

PlsaModel read_plsa_model(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_plsa_model(in);
}

}  // namespace beaconclust
