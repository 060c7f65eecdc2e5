#include <cmath>

#include <gtest/gtest.h>

#include "iormon/brute_force.hpp"
#include "iormon/errors.hpp"
#include "iormon/generators.hpp"
#include "iormon/periodic_monitor.hpp"
#include "oracles.hpp"

namespace iormon {
namespace {

struct Case {
  StaticBackend backend;
  Norm norm;
};

void PrintTo(const Case& c, std::ostream* os) {
  *os << (c.backend == StaticBackend::kKdTree ? "kdtree" : "snn") << "-" << to_string(c.norm);
}

class PeriodicMonitorTest : public ::testing::TestWithParam<Case> {};

TEST_P(PeriodicMonitorTest, TauInvarianceAndRebuildCount) {
  const auto [backend, norm] = GetParam();
  const Schema s = Schema::all_numeric(3);
  const MetricSpec spec{.norm = norm, .epsilon_x = 0.08};
  const auto stream = gen_uniform(1000, 3, 2, 5);
  const auto expected = oracle::witness_sets(s, spec, stream);
  for (std::size_t tau : {1u, 7u, 64u, 1000u, 1000000000u}) {
    PeriodicMonitor m(s, spec, backend, tau);
    for (std::size_t i = 0; i < stream.size(); ++i) {
      ASSERT_EQ(m.observe(stream[i]).witness_ids, expected[i]) << "tau " << tau << " step " << i;
      ASSERT_LT(m.short_term_size(), tau);
      ASSERT_EQ(m.short_term_size() + m.long_term_size(), i + 1);
    }
    EXPECT_EQ(m.counters().rebuilds, stream.size() / tau);
  }
}

TEST_P(PeriodicMonitorTest, LongTermIndexAgreesWithScan) {
  const auto [backend, norm] = GetParam();
  const Schema s = Schema::all_numeric(4);
  const MetricSpec spec{.norm = norm, .epsilon_x = 0.3};
  const auto stream = gen_uniform(300, 4, 2, 6);
  PeriodicMonitor m(s, spec, backend, 50);
  DecisionMatcher matcher(s, spec);
  for (const auto& p : stream) {
    m.observe(p);
    if (m.short_term_size() != 0) continue;
    for (auto q : gen_uniform(20, 4, 2, p.id)) {
      q.id = 100000;
      IndexQueryStats stats;
      std::uint64_t comparisons = 0;
      ASSERT_EQ(m.long_term_index().query(q, stats),
                brute_force_search(m.long_term(), q, matcher, comparisons));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Backends, PeriodicMonitorTest,
                         ::testing::Values(Case{StaticBackend::kKdTree, Norm::kL2},
                                           Case{StaticBackend::kKdTree, Norm::kLinf},
                                           Case{StaticBackend::kSnn, Norm::kL2}),
                         [](const ::testing::TestParamInfo<Case>& info) {
                           return std::string(info.param.backend == StaticBackend::kKdTree ? "kdtree" : "snn") +
                                  "_" + std::string(to_string(info.param.norm));
                         });

TEST(PeriodicMonitorNameTest, Names) {
  EXPECT_EQ(PeriodicMonitor(Schema::all_numeric(1), MetricSpec{}, StaticBackend::kKdTree).name(), "kdtree");
  EXPECT_EQ(PeriodicMonitor(Schema::all_numeric(1), MetricSpec{}, StaticBackend::kSnn).name(), "snn");
  EXPECT_THROW(PeriodicMonitor(Schema::all_numeric(1), MetricSpec{}, StaticBackend::kKdTree, 0),
               ConfigError);
}

TEST(AmortizedCostTest, DirectSubstitution) {
  const CostFunction f = [](double m) { return m; };
  const CostFunction g = [](double) { return 1.0; };
  const CostFunction h = [](double i) { return i; };
  EXPECT_DOUBLE_EQ(amortized_cost(2, 100, f, g, h), 53.5);
}

TEST(AmortizedCostTest, TauOne) {
  const CostFunction f = [](double m) { return m * m; };
  const CostFunction g = [](double n) { return std::log2(n); };
  const CostFunction h = [](double i) { return 3 * i + 1; };
  EXPECT_DOUBLE_EQ(amortized_cost(1, 64, f, g, h), 65.0 * 65.0 + 6.0 + 4.0);
}

TEST(AmortizedCostTest, BestTauMatchesExhaustiveGrid) {
  const CostFunction f = [](double m) { return m * std::log2(m); };
  const CostFunction g = [](double n) { return std::log2(n); };
  const CostFunction h = [](double i) { return i; };
  std::vector<std::size_t> grid;
  for (std::size_t t = 1; t <= 1000; ++t) grid.push_back(t);
  const std::size_t n = 100000;
  std::size_t arg = 1;
  double best = amortized_cost(1, n, f, g, h);
  for (std::size_t t = 2; t <= 1000; ++t) {
    const double c = amortized_cost(t, n, f, g, h);
    if (c < best) {
      best = c;
      arg = t;
    }
  }
  EXPECT_EQ(best_tau(grid, n, f, g, h), arg);
}

TEST(AmortizedCostTest, TauGridIsPowersOfTwo) {
  EXPECT_EQ(tau_grid(10), (std::vector<std::size_t>{1, 2, 4, 8, 16}));
  EXPECT_EQ(tau_grid(8), (std::vector<std::size_t>{1, 2, 4, 8}));
}

TEST(CalibrateTauTest, ReturnsGridValue) {
  const auto sample = gen_uniform(2000, 4, 2, 1);
  const std::size_t tau =
      calibrate_tau(Schema::all_numeric(4), MetricSpec{.epsilon_x = 0.05}, StaticBackend::kKdTree,
                    sample, 100000);
  EXPECT_GE(tau, 1u);
  EXPECT_EQ(tau & (tau - 1), 0u);
}

}  // namespace
}  // namespace iormon
