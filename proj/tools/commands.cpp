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

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "beaconclust/cluster_model.hpp"
#include "beaconclust/corpus.hpp"
#include "beaconclust/em_trainer.hpp"
#include "beaconclust/error.hpp"
#include "beaconclust/eval.hpp"
#include "beaconclust/ingest.hpp"
#include "beaconclust/kmeans.hpp"
#include "beaconclust/model_io.hpp"
#include "beaconclust/plsa.hpp"
#include "beaconclust/synthgen.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust::cli {

namespace {

std::size_t default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Where a subcommand gets its training users: a corpus file, or a raw event
/// log aggregated on the fly (no beacon filtering).
struct CorpusSource {
  std::string corpus;
  std::string events = "events.tsv";
  int window_days = kDefaultWindowDays;
  std::optional<std::int64_t> now;
  bool lenient = false;

  void add_options(CLI::App& cmd) {
    cmd.add_option("--corpus", corpus, "Corpus file (user_id<TAB>total<TAB>beacon:count,...)");
    cmd.add_option("--events", events, "Event log TSV, used when --corpus is absent")->capture_default_str();
    add_window_options(cmd);
  }

  void add_window_options(CLI::App& cmd) {
    cmd.add_option("--window-days", window_days, "Lookback window in days")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--now", now, "End of the window, seconds since epoch (default: latest event timestamp)");
    cmd.add_flag("--lenient", lenient, "Skip malformed event lines with a warning instead of failing");
  }

  std::vector<EventRecord> load_events(const std::string& path) const {
    std::vector<std::string> diagnostics;
    ReadOptions options;
    options.strict = !lenient;
    options.diagnostics = &diagnostics;
    auto events = read_events(std::filesystem::path(path), options);
    for (const auto& d : diagnostics) std::cerr << "warning: " << d << '\n';
    return events;
  }

  std::int64_t resolve_now(const std::vector<EventRecord>& events) const {
    if (now) return *now;
    std::int64_t latest = 0;
    for (const auto& e : events) latest = std::max(latest, e.timestamp);
    return latest;
  }

  Corpus load() const {
    if (!corpus.empty()) return read_corpus(std::filesystem::path(corpus));
    const auto records = load_events(events);
    return build_corpus(records, window_days, resolve_now(records));
  }
};

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    return;
  }
  auto out = open_output(path);
  body(out);
  out.close();
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

void write_assignments(const std::string& path, const Corpus& corpus,
                       const std::function<ClusterIndex(std::size_t)>& cluster_of) {
  write_to(path, [&](std::ostream& out) {
    for (std::size_t j = 0; j < corpus.num_users(); ++j) out << corpus.user(j).user << '\t' << cluster_of(j) << '\n';
  });
}

ClusteringMode parse_mode(const std::string& text) {
  return text == "soft" ? ClusteringMode::kSoft : ClusteringMode::kHard;
}

}  // namespace

void register_gen(CLI::App& app) {
  struct Options {
    SynthConfig config;
    std::string overlap = "disjoint";
    std::string events = "events.tsv";
    std::string truth = "truth.tsv";
    std::size_t holdout = 0;
    std::string holdout_events = "heldout_events.tsv";
  };
  auto opt = std::make_shared<Options>();
  auto* cmd = app.add_subcommand("gen", "Generate a synthetic event log from planted clusters");
  cmd->add_option("--k", opt->config.k_true, "Number of planted clusters")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--users", opt->config.n_users, "Number of users")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--beacons", opt->config.n_beacons, "Vocabulary size")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--min-events", opt->config.min_events, "Fewest events per user")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--max-events", opt->config.max_events, "Most events per user")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--overlap", opt->overlap, "Cluster supports: disjoint or dirichlet")
      ->capture_default_str()
      ->check(CLI::IsMember({"disjoint", "dirichlet"}));
  cmd->add_option("--alpha", opt->config.alpha, "Dirichlet concentration for --overlap dirichlet")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->config.seed, "Random seed")->required();
  cmd->add_option("--now", opt->config.now, "Window end, seconds since epoch")->capture_default_str();
  cmd->add_option("--window-days", opt->config.window_days, "Window length in days")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--events", opt->events, "Output event log")->capture_default_str();
  cmd->add_option("--truth", opt->truth, "Output truth file (user_id<TAB>true_cluster)")->capture_default_str();
  cmd->add_option("--holdout-users", opt->holdout, "Move the events of the last N users to --holdout-events")
      ->capture_default_str();
  cmd->add_option("--holdout-events", opt->holdout_events, "Event log for held-out users")->capture_default_str();
  cmd->callback([opt] {
    opt->config.overlap = opt->overlap == "dirichlet" ? Overlap::kDirichlet : Overlap::kDisjoint;
    if (opt->holdout >= opt->config.n_users) fail(ErrorCode::kInvalidArgument, "--holdout-users must be below --users");
    const auto data = generate(opt->config);
    std::set<std::string> held;
    for (std::size_t j = opt->config.n_users - opt->holdout; j < opt->config.n_users; ++j) {
      held.insert(data.truth.users[j]);
    }
    std::vector<EventRecord> train_events;
    std::vector<EventRecord> held_events;
    for (const auto& e : data.events) (held.count(e.user) ? held_events : train_events).push_back(e);
    write_to(opt->events, [&](std::ostream& out) { write_events(train_events, out); });
    if (opt->holdout > 0) write_to(opt->holdout_events, [&](std::ostream& out) { write_events(held_events, out); });
    write_to(opt->truth, [&](std::ostream& out) { write_labeling(data.truth.label_map(), out); });
    std::cout << "generated " << data.events.size() << " events for " << opt->config.n_users << " users in "
              << opt->config.k_true << " clusters\n";
  });
}

void register_ingest(CLI::App& app) {
  struct Options {
    CorpusSource source;
    std::string out = "corpus.tsv";
    FilterOptions filter;
    std::optional<std::size_t> sample_size;
    std::optional<std::uint64_t> seed;
    bool no_filter = false;
  };
  auto opt = std::make_shared<Options>();
  auto* cmd = app.add_subcommand("ingest", "Aggregate an event log into a filtered corpus");
  cmd->add_option("--events", opt->source.events, "Event log TSV (timestamp<TAB>user_id<TAB>beacon_id)")
      ->capture_default_str();
  opt->source.add_window_options(*cmd);
  cmd->add_option("--out", opt->out, "Output corpus file")->capture_default_str();
  cmd->add_option("--min-users", opt->filter.min_users, "Drop beacons fired by fewer distinct users")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-user-fraction", opt->filter.max_user_fraction,
                  "Drop beacons fired by more than this fraction of users")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--sample-size", opt->sample_size, "Uniformly sample this many surviving beacons");
  cmd->add_option("--seed", opt->seed, "Random seed (required with --sample-size)");
  cmd->add_flag("--no-filter", opt->no_filter, "Skip beacon frequency filtering");
  cmd->callback([opt] {
    if (opt->sample_size && !opt->seed) fail(ErrorCode::kInvalidArgument, "--sample-size requires --seed");
    const auto records = opt->source.load_events(opt->source.events);
    auto corpus = build_corpus(records, opt->source.window_days, opt->source.resolve_now(records));
    const auto before = corpus.num_beacons();
    if (!opt->no_filter) {
      opt->filter.sample_size = opt->sample_size;
      opt->filter.seed = opt->seed.value_or(0);
      corpus = filter_beacons(corpus, opt->filter);
    }
    write_to(opt->out, [&](std::ostream& out) { write_corpus(corpus, out); });
    std::cerr << "corpus: " << corpus.num_users() << " users, " << corpus.num_beacons() << " of " << before
              << " beacons, " << corpus.total_events() << " events\n";
  });
}

void register_train(CLI::App& app) {
  struct Options {
    CorpusSource source;
    TrainConfig config;
    std::string mode = "hard";
    std::string model = "model.txt";
    std::string assignments = "assignments.tsv";
    std::string trace = "trace.csv";
    std::string flagged = "flagged.tsv";
  };
  auto opt = std::make_shared<Options>();
  opt->config.threads = default_threads();
  auto* cmd = app.add_subcommand("train", "Train the beacon -> cluster model with EM");
  opt->source.add_options(*cmd);
  cmd->add_option("--k", opt->config.k, "Number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--mode", opt->mode, "hard or soft clustering")
      ->capture_default_str()
      ->check(CLI::IsMember({"hard", "soft"}));
  cmd->add_option("--max-iters", opt->config.max_iters, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opt->config.tol, "Stop when no parameter moves more than this")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->config.seed, "Random seed for the initial assignment")->required();
  cmd->add_option("--shards", opt->config.shards, "User shards; fixes the summation order")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opt->config.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  cmd->add_option("--smoothing", opt->config.smoothing, "Additive smoothing on p(b|c)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--model", opt->model, "Output model file")->capture_default_str();
  cmd->add_option("--assignments", opt->assignments, "Output training assignments")->capture_default_str();
  cmd->add_option("--trace", opt->trace, "Output objective trace CSV")->capture_default_str();
  cmd->add_option("--flagged", opt->flagged, "Output list of empty clusters")->capture_default_str();
  cmd->callback([opt] {
    opt->config.mode = parse_mode(opt->mode);
    opt->config.validate();
    const auto corpus = opt->source.load();
    const auto result = train(corpus, opt->config);
    write_model(result.model, std::filesystem::path(opt->model));
    write_assignments(opt->assignments, corpus, [&](std::size_t j) { return result.responsibilities.cluster_of(j); });
    write_to(opt->trace, [&](std::ostream& out) {
      out << "iter,log_objective,max_param_delta\n";
      for (const auto& s : result.trace) {
        out << s.iteration << ',' << format_double(s.log_objective) << ',' << format_double(s.max_param_delta) << '\n';
      }
    });
    write_to(opt->flagged, [&](std::ostream& out) {
      for (const auto c : result.params.empty_clusters) out << c << "\tempty\n";
    });
    std::cout << "trained k=" << opt->config.k << " (" << opt->mode << ") on " << corpus.num_users() << " users: "
              << result.iterations << " iterations, " << (result.converged ? "converged" : "hit max-iters") << ", "
              << result.params.empty_clusters.size() << " empty clusters\n";
  });
}

void register_plsa_train(CLI::App& app) {
  struct Options {
    CorpusSource source;
    PlsaConfig config;
    std::string model = "plsa_model.txt";
    std::string assignments = "plsa_assignments.tsv";
    std::string trace = "plsa_trace.csv";
  };
  auto opt = std::make_shared<Options>();
  opt->config.threads = default_threads();
  auto* cmd = app.add_subcommand("plsa-train", "Train classic pLSA for comparison");
  opt->source.add_options(*cmd);
  cmd->add_option("--k", opt->config.k, "Number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", opt->config.max_iters, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opt->config.tol, "Stop when no parameter moves more than this")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->config.seed, "Random seed for the initial tables")->required();
  cmd->add_option("--shards", opt->config.shards, "User shards")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opt->config.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  cmd->add_option("--model", opt->model, "Output pLSA model file")->capture_default_str();
  cmd->add_option("--assignments", opt->assignments, "Output training assignments")->capture_default_str();
  cmd->add_option("--trace", opt->trace, "Output log-likelihood trace CSV")->capture_default_str();
  cmd->callback([opt] {
    opt->config.validate();
    const auto corpus = opt->source.load();
    const auto result = plsa_train(corpus, opt->config);
    write_plsa_model(result.model, std::filesystem::path(opt->model));
    write_assignments(opt->assignments, corpus, [&](std::size_t j) { return argmax(result.model.doc_row(j)); });
    write_to(opt->trace, [&](std::ostream& out) {
      out << "iter,log_likelihood,max_param_delta\n";
      for (const auto& s : result.trace) {
        out << s.iteration << ',' << format_double(s.log_likelihood) << ',' << format_double(s.max_param_delta)
            << '\n';
      }
    });
    std::cout << "trained pLSA k=" << opt->config.k << " on " << corpus.num_users() << " users: " << result.iterations
              << " iterations, " << (result.converged ? "converged" : "hit max-iters") << '\n';
  });
}

void register_kmeans(CLI::App& app) {
  struct Options {
    CorpusSource source;
    KMeansConfig config;
    std::optional<std::size_t> target_k;
    std::string assignments = "kmeans_assignments.tsv";
  };
  auto opt = std::make_shared<Options>();
  opt->config.threads = default_threads();
  auto* cmd = app.add_subcommand("kmeans", "Run the weighted-cosine k-means baseline");
  opt->source.add_options(*cmd);
  cmd->add_option("--merge-threshold", opt->config.merge_threshold, "Merge centroids at least this similar")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-rounds", opt->config.max_rounds, "Round cap")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--target-k", opt->target_k, "Force merging down to this many centroids");
  cmd->add_option("--weight-scale", opt->config.weight_scale, "alpha in w_i = alpha * |u(b_i)|")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->config.seed, "Recorded seed; the baseline itself is deterministic")->required();
  cmd->add_option("--threads", opt->config.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  cmd->add_option("--assignments", opt->assignments, "Output assignments")->capture_default_str();
  cmd->callback([opt] {
    opt->config.target_k = opt->target_k;
    opt->config.validate();
    const auto corpus = opt->source.load();
    const auto result = kmeans_cluster(corpus, opt->config);
    write_assignments(opt->assignments, corpus, [&](std::size_t j) { return result.assignments[j]; });
    std::cout << "k-means: " << result.centroids.size() << " centroids after " << result.rounds << " rounds ("
              << result.merges << " merges)\n";
  });
}

void register_assign(CLI::App& app) {
  struct Options {
    std::string model;
    std::string input;
    CorpusSource source;
    std::string out = "-";
    bool posterior = false;
    bool allow_unknown = false;
  };
  auto opt = std::make_shared<Options>();
  opt->source.events.clear();
  auto* cmd = app.add_subcommand("assign", "Assign users to clusters from a trained model");
  cmd->add_option("--model", opt->model, "Model file from train or plsa-train")->required();
  cmd->add_option("--input", opt->input, "User histories in corpus format");
  cmd->add_option("--events", opt->source.events, "Event log to aggregate instead of --input");
  opt->source.add_window_options(*cmd);
  cmd->add_option("--out", opt->out, "Output assignments TSV ('-' for stdout)")->capture_default_str();
  cmd->add_flag("--posterior", opt->posterior, "Append the posterior p(c|u) as extra columns");
  cmd->add_flag("--allow-unknown", opt->allow_unknown, "Emit cluster -1 for users with no known beacon");
  cmd->callback([opt] {
    std::vector<UserHistory> histories;
    if (!opt->input.empty()) {
      histories = read_histories(std::filesystem::path(opt->input));
    } else if (!opt->source.events.empty()) {
      const auto records = opt->source.load_events(opt->source.events);
      histories = build_corpus(records, opt->source.window_days, opt->source.resolve_now(records)).histories();
    } else {
      fail(ErrorCode::kInvalidArgument, "assign needs --input or --events");
    }

    std::string header;
    {
      auto in = open_input(opt->model);
      std::getline(in, header);
    }
    const bool plsa = header.rfind("beaconclust-plsa", 0) == 0;
    std::optional<ClusterModel> model;
    std::optional<PlsaModel> plsa_model;
    if (plsa) {
      plsa_model = read_plsa_model(std::filesystem::path(opt->model));
    } else {
      model = read_model(std::filesystem::path(opt->model));
    }

    std::ostringstream buffer;
    for (const auto& h : histories) {
      std::optional<Assignment> a;
      try {
        a = plsa ? plsa_assign(*plsa_model, h.user) : assign_user(*model, h);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoKnownBeacons || !opt->allow_unknown) throw;
      }
      if (!a) {
        buffer << h.user << "\t-1\n";
        continue;
      }
      buffer << a->user << '\t' << a->cluster;
      if (opt->posterior && a->posterior) {
        for (const double p : *a->posterior) buffer << '\t' << format_double(p);
      }
      buffer << '\n';
    }
    write_to(opt->out, [&](std::ostream& out) { out << buffer.str(); });
  });
}

void register_eval(CLI::App& app) {
  struct Options {
    std::string predicted = "assignments.tsv";
    std::string truth = "truth.tsv";
    std::optional<double> cost;
    std::uint64_t actions = 0;
    std::uint64_t clicks = 0;
    bool csv = false;
  };
  auto opt = std::make_shared<Options>();
  auto* cmd = app.add_subcommand("eval", "Score assignments against truth; compute eCPA/eCPC");
  auto* predicted = cmd->add_option("--predicted", opt->predicted, "Predicted assignments TSV")->capture_default_str();
  auto* truth = cmd->add_option("--truth", opt->truth, "Truth assignments TSV")->capture_default_str();
  auto* cost = cmd->add_option("--cost", opt->cost, "Advertising cost for eCPA/eCPC")->check(CLI::NonNegativeNumber);
  cmd->add_option("--actions", opt->actions, "Number of actions")->capture_default_str();
  cmd->add_option("--clicks", opt->clicks, "Number of clicks")->capture_default_str();
  cmd->add_flag("--csv", opt->csv, "Print metric,value CSV instead of a table");
  cmd->callback([opt, predicted, truth, cost] {
    std::vector<std::pair<std::string, std::string>> rows;
    const bool recovery = predicted->count() > 0 || truth->count() > 0 || cost->count() == 0;
    if (recovery) {
      const auto m = recovery_metrics(read_labeling(std::filesystem::path(opt->predicted)),
                                      read_labeling(std::filesystem::path(opt->truth)));
      rows.emplace_back("ARI", format_double(m.ari));
      rows.emplace_back("purity", format_double(m.purity));
      rows.emplace_back("NMI", format_double(m.nmi));
    }
    if (opt->cost) {
      const auto show = [](std::optional<double> x) { return x ? format_double(*x) : std::string("NA"); };
      rows.emplace_back("eCPA", show(ecpa(*opt->cost, opt->actions)));
      rows.emplace_back("eCPC", show(ecpc(*opt->cost, opt->clicks)));
    }
    if (opt->csv) {
      std::cout << "metric,value\n";
      for (const auto& [k, v] : rows) std::cout << k << ',' << v << '\n';
    } else {
      for (const auto& [k, v] : rows) std::cout << std::left << std::setw(8) << k << v << '\n';
    }
  });
}

void register_report(CLI::App& app) {
  struct Options {
    std::vector<std::string> traces;
    std::string out = "-";
  };
  auto opt = std::make_shared<Options>();
  auto* cmd = app.add_subcommand("report", "Merge objective traces into one side-by-side CSV");
  cmd->add_option("traces", opt->traces, "Trace CSV files from train / plsa-train")->required();
  cmd->add_option("--out", opt->out, "Output CSV ('-' for stdout)")->capture_default_str();
  cmd->callback([opt] {
    std::vector<Trace> traces;
    for (const auto& path : opt->traces) traces.push_back(read_trace(std::filesystem::path(path)));
    write_to(opt->out, [&](std::ostream& out) { objective_report(traces, out); });
  });
}

}  // namespace beaconclust::cli
