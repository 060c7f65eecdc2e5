#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "iormon/brute_force.hpp"
#include "iormon/errors.hpp"
#include "iormon/generators.hpp"
#include "oracles.hpp"

namespace iormon {
namespace {

TEST(MonitorContractTest, FirstPointHasNoWitnesses) {
  BruteForceMonitor m(Schema::all_numeric(1), MetricSpec{});
  const WitnessReport r = m.observe({0, {0.5}, "A"});
  EXPECT_EQ(r.query_id, 0u);
  EXPECT_FALSE(r.violation());
}

TEST(MonitorContractTest, OneDimensionalExamples) {
  const MetricSpec spec{.epsilon_x = 0.1};
  BruteForceMonitor differ(Schema::all_numeric(1), spec);
  differ.observe({0, {0.0}, "A"});
  EXPECT_EQ(differ.observe({1, {0.05}, "B"}).witness_ids, std::vector<PointId>{0});

  BruteForceMonitor same(Schema::all_numeric(1), spec);
  same.observe({0, {0.0}, "A"});
  EXPECT_TRUE(same.observe({1, {0.05}, "A"}).witness_ids.empty());
}

TEST(MonitorContractTest, BoundaryIsInclusive) {
  BruteForceMonitor m(Schema::all_numeric(2), MetricSpec{.norm = Norm::kL2, .epsilon_x = 0.25});
  m.observe({0, {0.5, 0.5}, "A"});
  EXPECT_EQ(m.observe({1, {0.75, 0.5}, "B"}).witness_ids, std::vector<PointId>{0});
}

TEST(MonitorContractTest, IdsMustIncrease) {
  BruteForceMonitor m(Schema::all_numeric(1), MetricSpec{});
  m.observe({5, {0.0}, "A"});
  EXPECT_THROW(m.observe({5, {0.0}, "B"}), StreamOrderError);
  EXPECT_THROW(m.observe({4, {0.0}, "B"}), StreamOrderError);
  EXPECT_NO_THROW(m.observe({9, {0.0}, "B"}));
  EXPECT_EQ(m.last_id(), std::optional<PointId>(9));
}

TEST(MonitorContractTest, RejectsNonconformingPoint) {
  BruteForceMonitor m(Schema::all_numeric(2), MetricSpec{});
  EXPECT_THROW(m.observe({0, {0.0}, "A"}), SchemaError);
  EXPECT_FALSE(m.last_id().has_value());
}

TEST(BruteForceTest, HandCheckedTwoDimensional) {
  BruteForceMonitor m(Schema::all_numeric(2), MetricSpec{.norm = Norm::kL2, .epsilon_x = 0.2});
  m.observe({0, {0.1, 0.1}, "A"});  // distance 0.1 from the query
  m.observe({1, {0.5, 0.5}, "A"});  // far
  m.observe({2, {0.2, 0.3}, "B"});  // close, same label as the query
  EXPECT_EQ(m.observe({3, {0.2, 0.1}, "B"}).witness_ids, std::vector<PointId>{0});
}

TEST(BruteForceTest, SharedLabelMeansNoWitnesses) {
  BruteForceMonitor m(Schema::all_numeric(1), MetricSpec{.epsilon_x = 1.0});
  for (PointId i = 0; i < 10; ++i) m.observe({i, {0.0}, "A"});
  EXPECT_TRUE(m.observe({10, {0.0}, "A"}).witness_ids.empty());
}

TEST(BruteForceTest, ComparisonsEqualHistorySize) {
  BruteForceMonitor m(Schema::all_numeric(3), MetricSpec{});
  const auto stream = gen_uniform(300, 3, 2, 1);
  std::uint64_t before = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    m.observe(stream[i]);
    ASSERT_EQ(m.counters().comparisons - before, i);
    before = m.counters().comparisons;
  }
  EXPECT_EQ(m.counters().points_stored, 300u);
  EXPECT_EQ(m.counters().queries, 300u);
}

TEST(BruteForceTest, MatchesPairwiseOracle) {
  for (Norm norm : {Norm::kL2, Norm::kLinf}) {
    for (std::size_t d : {1u, 4u, 8u}) {
      const MetricSpec spec{.norm = norm, .epsilon_x = d == 1 ? 0.01 : 0.3};
      const Schema s = Schema::all_numeric(d);
      const auto stream = gen_uniform(500, d, 3, 42 + d);
      BruteForceMonitor m(s, spec);
      EXPECT_EQ(oracle::replay(m, stream), oracle::witness_sets(s, spec, stream));
    }
  }
}

TEST(BruteForceTest, AbsorbStoresWithoutReporting) {
  const auto stream = gen_uniform(100, 2, 2, 3);
  const MetricSpec spec{.epsilon_x = 0.2};
  BruteForceMonitor warm(Schema::all_numeric(2), spec);
  warm.absorb(std::span(stream).first(60));
  BruteForceMonitor cold(Schema::all_numeric(2), spec);
  const auto all = oracle::replay(cold, stream);
  for (std::size_t i = 60; i < stream.size(); ++i) {
    ASSERT_EQ(warm.observe(stream[i]).witness_ids, all[i]);
  }
}

TEST(ViolationPropertyTest, PersistenceAndSymmetry) {
  const Schema s = Schema::all_numeric(2);
  const MetricSpec spec{.norm = Norm::kLinf, .epsilon_x = 0.05};
  const auto stream = gen_uniform(400, 2, 2, 77);

  BruteForceMonitor forward(s, spec);
  std::uint64_t pairs = 0;
  std::set<std::pair<PointId, PointId>> forward_pairs;
  for (const auto& p : stream) {
    const auto r = forward.observe(p);
    const std::uint64_t next = pairs + r.witness_ids.size();
    ASSERT_GE(next, pairs);
    pairs = next;
    for (PointId w : r.witness_ids) forward_pairs.emplace(w, p.id);
  }

  // Reverse the arrival order and relabel ids so they increase again.
  std::vector<DecisionPoint> reversed(stream.rbegin(), stream.rend());
  const PointId last = stream.size() - 1;
  for (std::size_t i = 0; i < reversed.size(); ++i) reversed[i].id = i;
  BruteForceMonitor backward(s, spec);
  std::set<std::pair<PointId, PointId>> backward_pairs;
  for (const auto& p : reversed) {
    for (PointId w : backward.observe(p).witness_ids) {
      // Map back to original ids; the original pair is (earlier, later).
      backward_pairs.emplace(last - p.id, last - w);
    }
  }
  EXPECT_EQ(forward_pairs, backward_pairs);
  EXPECT_EQ(pairs, forward_pairs.size());
}

}  // namespace
}  // namespace iormon
