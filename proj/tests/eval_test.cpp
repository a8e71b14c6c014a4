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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "beaconclust/error.hpp"
#include "beaconclust/eval.hpp"

namespace beaconclust {
namespace {

// Rand index by explicit pair enumeration, chance-corrected with the
// closed-form expectation over pairs.
double pair_count_ari(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  const std::size_t n = a.size();
  double both = 0;
  double same_a = 0;
  double same_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      same_a += sa;
      same_b += sb;
    }
  }
  const double pairs = static_cast<double>(n) * (n - 1) / 2;
  const double expected = same_a * same_b / pairs;
  const double max_index = (same_a + same_b) / 2;
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

TEST(Recovery, IdentityAndRelabeling) {
  const std::vector<std::int64_t> truth = {0, 0, 1, 1, 2, 2, 2};
  const auto m = recovery_metrics(truth, truth);
  EXPECT_DOUBLE_EQ(m.ari, 1.0);
  EXPECT_DOUBLE_EQ(m.purity, 1.0);
  EXPECT_NEAR(m.nmi, 1.0, 1e-12);
  const std::vector<std::int64_t> renamed = {7, 7, -3, -3, 40, 40, 40};
  EXPECT_DOUBLE_EQ(recovery_metrics(renamed, truth).ari, 1.0);
  EXPECT_NEAR(recovery_metrics(renamed, truth).nmi, 1.0, 1e-12);
}

TEST(Recovery, HandValues) {
  // Predicted {0,0,0,1}, truth {0,0,1,1}: purity 3/4.
  const std::vector<std::int64_t> p = {0, 0, 0, 1};
  const std::vector<std::int64_t> t = {0, 0, 1, 1};
  const auto m = recovery_metrics(p, t);
  EXPECT_DOUBLE_EQ(m.purity, 0.75);
  EXPECT_NEAR(m.ari, pair_count_ari(p, t), 1e-12);
  EXPECT_GT(m.nmi, 0.0);
  EXPECT_LT(m.nmi, 1.0);
}

TEST(Recovery, RandomPermutationNearZero) {
  std::mt19937_64 gen(61);
  std::vector<std::int64_t> truth(10000);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<std::int64_t>(i % 10);
  auto shuffled = truth;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  EXPECT_LT(std::abs(adjusted_rand_index(shuffled, truth)), 0.05);
}

TEST(RecoveryProperty, AriMatchesPairCounting) {
  std::mt19937_64 gen(62);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    const std::int64_t ka = 1 + static_cast<std::int64_t>(gen() % 5);
    const std::int64_t kb = 1 + static_cast<std::int64_t>(gen() % 5);
    std::vector<std::int64_t> a(n);
    std::vector<std::int64_t> b(n);
    for (auto& x : a) x = static_cast<std::int64_t>(gen() % ka);
    for (auto& x : b) x = static_cast<std::int64_t>(gen() % kb);
    EXPECT_NEAR(adjusted_rand_index(a, b), pair_count_ari(a, b), 1e-12);
    EXPECT_NEAR(adjusted_rand_index(a, b), adjusted_rand_index(b, a), 1e-12);
    const auto m = recovery_metrics(a, b);
    EXPECT_GE(m.purity, 0.0);
    EXPECT_LE(m.purity, 1.0);
    EXPECT_GE(m.nmi, -1e-12);
    EXPECT_LE(m.nmi, 1.0 + 1e-12);
  }
}

TEST(Recovery, LabelingsMustCoverSameUsers) {
  const Labeling a = {{"u1", 0}, {"u2", 1}};
  const Labeling b = {{"u1", 0}, {"u3", 1}};
  try {
    recovery_metrics(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUserSetMismatch);
  }
}

TEST(Metrics, CostPerActionAndClick) {
  EXPECT_EQ(ecpa(100.0, 4), 25.0);
  EXPECT_EQ(ecpa(0.0, 10), 0.0);
  EXPECT_FALSE(ecpa(100.0, 0).has_value());
  EXPECT_EQ(ecpc(100.0, 4), 25.0);
  EXPECT_EQ(ecpc(0.0, 10), 0.0);
  EXPECT_FALSE(ecpc(100.0, 0).has_value());
  EXPECT_THROW(ecpa(-1.0, 3), Error);
}

TEST(Labeling, RoundTripAndExtraColumns) {
  std::istringstream in("u1\t3\t0.9\t0.1\nu2\t-1\n");
  const auto labels = read_labeling(in);
  EXPECT_EQ(labels.at("u1"), 3);
  EXPECT_EQ(labels.at("u2"), -1);
  std::stringstream buffer;
  write_labeling(labels, buffer);
  EXPECT_EQ(read_labeling(buffer), labels);
}

Trace trace_of(std::string name, std::vector<double> values) {
  Trace t;
  t.name = std::move(name);
  t.value_column = "log_likelihood";
  for (std::size_t i = 0; i < values.size(); ++i) t.rows.push_back({i + 1, values[i], 0.5});
  return t;
}

TEST(Report, SingleTrace) {
  const std::vector<Trace> traces = {trace_of("plsa", {-10, -8, -7.5})};
  std::ostringstream out;
  objective_report(traces, out);
  EXPECT_EQ(out.str(),
            "iter,plsa.log_likelihood,plsa.max_param_delta,plsa.monotone\n"
            "1,-10,0.5,true\n2,-8,0.5,true\n3,-7.5,0.5,true\n");
}

TEST(Report, PadsShorterTraceAndFlagsDecrease) {
  const std::vector<Trace> traces = {trace_of("a", {1, 2, 1.5}), trace_of("b", {4})};
  std::ostringstream out;
  objective_report(traces, out);
  EXPECT_EQ(out.str(),
            "iter,a.log_likelihood,a.max_param_delta,a.monotone,b.log_likelihood,b.max_param_delta,b.monotone\n"
            "1,1,0.5,true,4,0.5,true\n2,2,0.5,true,,,\n3,1.5,0.5,false,,,\n");
}

TEST(Report, TraceFileRoundTrip) {
  const auto t = trace_of("x", {-3, -2.25});
  std::stringstream buffer;
  write_trace(t, buffer);
  const auto back = read_trace(buffer, "x");
  EXPECT_EQ(back.value_column, "log_likelihood");
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].value, -2.25);
  std::istringstream bad("iteration,v\n");
  EXPECT_THROW(read_trace(bad, "bad"), Error);
}

}  // namespace
}  // namespace beaconclust
