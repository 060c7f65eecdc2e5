#include <algorithm>

#include <gtest/gtest.h>

#include "iormon/brute_force.hpp"
#include "iormon/generators.hpp"
#include "iormon/kd_tree.hpp"
#include "oracles.hpp"

namespace iormon {
namespace {

std::vector<PointId> scan(std::span<const DecisionPoint> pts, const DecisionPoint& q,
                          const Schema& s, const MetricSpec& spec) {
  std::vector<PointId> out;
  for (const auto& p : pts) {
    if (oracle::decision_distance(s, spec, p, q) <= spec.epsilon_x) out.push_back(p.id);
  }
  return out;
}

TEST(KdTreeTest, EmptyTree) {
  const Schema s = Schema::all_numeric(2);
  KdTree t(s, MetricSpec{});
  t.build({});
  IndexQueryStats stats;
  EXPECT_TRUE(t.query({0, {0.5, 0.5}, "A"}, stats).empty());
  EXPECT_EQ(t.size(), 0u);
}

TEST(KdTreeTest, SinglePointIsOneLeaf) {
  const Schema s = Schema::all_numeric(2);
  KdTree t(s, MetricSpec{});
  const std::vector<DecisionPoint> pts{{3, {0.1, 0.2}, "A"}};
  t.build(pts);
  ASSERT_EQ(t.node_count(), 1u);
  EXPECT_TRUE(t.nodes()[0].leaf());
  EXPECT_EQ(t.leaf_ids(), std::vector<PointId>{3});
}

TEST(KdTreeTest, LeafIdsEqualInputAndInvariantsHold) {
  const Schema s = Schema::all_numeric(8);
  const auto pts = gen_uniform(1000, 8, 2, 9);
  KdTree t(s, MetricSpec{});
  t.build(pts);
  auto ids = t.leaf_ids();
  std::sort(ids.begin(), ids.end());
  std::vector<PointId> expected;
  for (const auto& p : pts) expected.push_back(p.id);
  EXPECT_EQ(ids, expected);
  EXPECT_TRUE(t.check_invariants());
  for (const auto& n : t.nodes()) {
    if (n.leaf()) EXPECT_LE(n.end - n.begin, 16u);
  }
}

TEST(KdTreeTest, DuplicatePointsKeepInvariants) {
  const Schema s = Schema::all_numeric(2);
  std::vector<DecisionPoint> pts;
  for (PointId i = 0; i < 200; ++i) pts.push_back({i, {0.5, i % 3 == 0 ? 0.25 : 0.5}, "A"});
  KdTree t(s, MetricSpec{});
  t.build(pts);
  EXPECT_TRUE(t.check_invariants());
  IndexQueryStats stats;
  // Only the points at (0.5, 0.5) are within the default radius.
  EXPECT_EQ(t.query({500, {0.5, 0.5}, "B"}, stats).size(), 133u);
}

TEST(KdTreeTest, BoundaryIncluded) {
  const Schema s = Schema::all_numeric(2);
  const MetricSpec spec{.norm = Norm::kL2, .epsilon_x = 0.25};
  std::vector<DecisionPoint> pts;
  for (PointId i = 0; i < 40; ++i) pts.push_back({i, {0.0, 0.0}, "A"});
  pts.push_back({40, {0.5, 0.25}, "A"});
  KdTree t(s, spec);
  t.build(pts);
  IndexQueryStats stats;
  EXPECT_EQ(t.query({41, {0.5, 0.5}, "B"}, stats), std::vector<PointId>{40});
}

TEST(KdTreeTest, SameLabelGivesNothing) {
  const Schema s = Schema::all_numeric(2);
  auto pts = gen_uniform(300, 2, 1, 4);
  KdTree t(s, MetricSpec{.epsilon_x = 0.5});
  t.build(pts);
  IndexQueryStats stats;
  EXPECT_TRUE(t.query({1000, {0.5, 0.5}, "0"}, stats).empty());
}

TEST(KdTreeTest, EqualsLinearScan) {
  for (Norm norm : {Norm::kL2, Norm::kLinf}) {
    for (std::size_t d : {2u, 8u, 24u}) {
      const Schema s = Schema::all_numeric(d);
      const MetricSpec spec{.norm = norm, .epsilon_x = d == 2 ? 0.05 : 0.4};
      const auto pts = gen_uniform(1000, d, 2, d);
      const auto queries = gen_uniform(200, d, 2, d + 100);
      KdTree t(s, spec);
      t.build(pts);
      for (auto q : queries) {
        q.id = 5000;
        IndexQueryStats stats;
        ASSERT_EQ(t.query(q, stats), scan(pts, q, s, spec));
        ASSERT_LE(stats.nodes_visited, t.node_count());
      }
    }
  }
}

TEST(KdTreeTest, PrunesOnClusteredData) {
  const Schema s = Schema::all_numeric(4);
  Rng rng(8);
  std::vector<DecisionPoint> pts;
  for (PointId i = 0; i < 4000; ++i) {
    const double cx = (i % 8) / 8.0;
    std::vector<double> f(4);
    for (auto& x : f) x = cx + rng.uniform(0, 0.01);
    pts.push_back({i, f, i % 2 ? "A" : "B"});
  }
  KdTree t(s, MetricSpec{.epsilon_x = 0.001});
  t.build(pts);
  IndexQueryStats stats;
  t.query({9999, {0.3, 0.3, 0.3, 0.3}, "A"}, stats);
  EXPECT_LT(stats.nodes_visited, t.node_count());
  EXPECT_LT(stats.nodes_visited, pts.size());
}

TEST(KdTreeTest, CategoricalColumnsFilteredAtQuery) {
  const Schema s({Column{.name = "x", .lower = 0, .upper = 1},
                  Column{.name = "c", .kind = ColumnKind::kCategorical, .categories = {"a", "b"}}});
  std::vector<DecisionPoint> pts{{0, {0.5, 0}, "A"}, {1, {0.5, 1}, "A"}};
  KdTree t(s, MetricSpec{});
  t.build(pts);
  IndexQueryStats stats;
  EXPECT_EQ(t.query({2, {0.5, 1}, "B"}, stats), std::vector<PointId>{1});
}

}  // namespace
}  // namespace iormon
