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

#include "beaconclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "beaconclust/error.hpp"
#include "beaconclust/text_format.hpp"

namespace beaconclust {

Labeling read_labeling(std::istream& in) {
  Labeling labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = "assignments line " + std::to_string(line_number);
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields[0].empty()) {
      fail(ErrorCode::kMalformedInput, where + ": expected user_id<TAB>cluster_id");
    }
    if (!labels.emplace(std::string(fields[0]), parse_int(fields[1], where)).second) {
      fail(ErrorCode::kMalformedInput, where + ": duplicate user '" + std::string(fields[0]) + "'");
    }
  }
  return labels;
}

Labeling read_labeling(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labeling(in);
}

void write_labeling(const Labeling& labels, std::ostream& out) {
  for (const auto& [user, label] : labels) out << user << '\t' << label << '\n';
}

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

struct Contingency {
  std::vector<std::vector<double>> table;
  std::vector<double> rows;
  std::vector<double> cols;
  double n = 0.0;
};

std::vector<std::size_t> dense_labels(std::span<const std::int64_t> labels, std::size_t& count) {
  std::map<std::int64_t, std::size_t> index;
  for (const auto l : labels) index.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [l, i] : index) i = next++;
  count = next;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto l : labels) out.push_back(index.at(l));
  return out;
}

Contingency contingency(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) fail(ErrorCode::kUserSetMismatch, "labelings differ in length");
  if (a.empty()) fail(ErrorCode::kInvalidArgument, "labelings are empty");
  std::size_t ka = 0;
  std::size_t kb = 0;
  const auto da = dense_labels(a, ka);
  const auto db = dense_labels(b, kb);
  Contingency c;
  c.table.assign(ka, std::vector<double>(kb, 0.0));
  c.rows.assign(ka, 0.0);
  c.cols.assign(kb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.table[da[i]][db[i]] += 1.0;
    c.rows[da[i]] += 1.0;
    c.cols[db[i]] += 1.0;
  }
  c.n = static_cast<double>(a.size());
  return c;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (const double x : counts) {
    if (x > 0.0) h -= x / n * std::log(x / n);
  }
  return h;
}

double ari_from(const Contingency& c) {
  double index = 0.0;
  for (const auto& row : c.table) {
    for (const double x : row) index += choose2(x);
  }
  double sum_rows = 0.0;
  double sum_cols = 0.0;
  for (const double x : c.rows) sum_rows += choose2(x);
  for (const double x : c.cols) sum_cols += choose2(x);
  const double expected = sum_rows * sum_cols / choose2(c.n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  // Both partitions trivial (one cluster, or all singletons): they agree fully.
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace

double adjusted_rand_index(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return ari_from(contingency(a, b));
}

RecoveryMetrics recovery_metrics(std::span<const std::int64_t> predicted, std::span<const std::int64_t> truth) {
  const auto c = contingency(predicted, truth);
  RecoveryMetrics m;
  m.ari = ari_from(c);

  double majority = 0.0;
  for (const auto& row : c.table) majority += *std::max_element(row.begin(), row.end());
  m.purity = majority / c.n;

  double mutual = 0.0;
  for (std::size_t i = 0; i < c.table.size(); ++i) {
    for (std::size_t j = 0; j < c.table[i].size(); ++j) {
      const double x = c.table[i][j];
      if (x > 0.0) mutual += x / c.n * std::log(c.n * x / (c.rows[i] * c.cols[j]));
    }
  }
  const double h_pred = entropy(c.rows, c.n);
  const double h_truth = entropy(c.cols, c.n);
  if (h_pred == 0.0 && h_truth == 0.0) {
    m.nmi = 1.0;
  } else {
    m.nmi = std::clamp(mutual / (0.5 * (h_pred + h_truth)), 0.0, 1.0);
  }
  return m;
}

RecoveryMetrics recovery_metrics(const Labeling& predicted, const Labeling& truth) {
  if (predicted.size() != truth.size()) {
    fail(ErrorCode::kUserSetMismatch, "predicted covers " + std::to_string(predicted.size()) +
                                          " users but truth covers " + std::to_string(truth.size()));
  }
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> t;
  p.reserve(predicted.size());
  t.reserve(truth.size());
  auto it = truth.begin();
  for (const auto& [user, label] : predicted) {
    if (it->first != user) fail(ErrorCode::kUserSetMismatch, "user '" + user + "' is missing from the truth");
    p.push_back(label);
    t.push_back(it->second);
    ++it;
  }
  return recovery_metrics(p, t);
}

namespace {

std::optional<double> cost_per(double cost, std::uint64_t events, const char* what) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + ": cost must be a non-negative amount");
  }
  if (events == 0) return std::nullopt;
  return cost / static_cast<double>(events);
}

}  // namespace

std::optional<double> ecpa(double cost, std::uint64_t actions) { return cost_per(cost, actions, "eCPA"); }
std::optional<double> ecpc(double cost, std::uint64_t clicks) { return cost_per(cost, clicks, "eCPC"); }

Trace read_trace(std::istream& in, std::string name) {
  Trace trace;
  trace.name = std::move(name);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = "trace '" + trace.name + "' line " + std::to_string(line_number);
    const auto fields = split(line, ',');
    if (fields.size() != 3) fail(ErrorCode::kMalformedInput, where + ": expected three comma-separated columns");
    if (trace.value_column.empty()) {
      if (fields[0] != "iter" || fields[2] != "max_param_delta" || fields[1].empty()) {
        fail(ErrorCode::kMalformedInput, where + ": expected header iter,<value>,max_param_delta");
      }
      trace.value_column = std::string(fields[1]);
      continue;
    }
    trace.rows.push_back({parse_uint(fields[0], where), parse_double(fields[1], where), parse_double(fields[2], where)});
  }
  if (trace.value_column.empty()) fail(ErrorCode::kMalformedInput, "trace '" + trace.name + "' has no header");
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_trace(in, path.stem().string());
}

void write_trace(const Trace& trace, std::ostream& out) {
  out << "iter," << trace.value_column << ",max_param_delta\n";
  for (const auto& r : trace.rows) {
    out << r.iteration << ',' << format_double(r.value) << ',' << format_double(r.max_param_delta) << '\n';
  }
}

void objective_report(std::span<const Trace> traces, std::ostream& out) {
  constexpr double kMonotoneSlack = 1e-9;
  std::size_t length = 0;
  out << "iter";
  for (const auto& t : traces) {
    out << ',' << t.name << '.' << t.value_column << ',' << t.name << ".max_param_delta," << t.name
        << ".monotone";
    length = std::max(length, t.rows.size());
  }
  out << '\n';
  for (std::size_t i = 0; i < length; ++i) {
    out << i + 1;
    for (const auto& t : traces) {
      if (i >= t.rows.size()) {
        out << ",,,";
        continue;
      }
      const bool monotone = i == 0 || t.rows[i].value >= t.rows[i - 1].value - kMonotoneSlack;
      out << ',' << format_double(t.rows[i].value) << ',' << format_double(t.rows[i].max_param_delta) << ','
          << (monotone ? "true" : "false");
    }
    out << '\n';
  }
}

}  // namespace beaconclust
