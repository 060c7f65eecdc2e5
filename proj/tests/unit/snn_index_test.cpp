#include <cmath>

#include <gtest/gtest.h>

#include "iormon/errors.hpp"
#include "iormon/generators.hpp"
#include "iormon/snn_index.hpp"
#include "oracles.hpp"

namespace iormon {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(PrincipalDirectionTest, LineAlongFirstAxis) {
  const std::vector<double> rows{0, 0, 1, 0, 2, 0, 3, 0};
  const auto v = principal_direction(rows, 2);
  EXPECT_NEAR(v[0], 1.0, 1e-9);
  EXPECT_NEAR(v[1], 0.0, 1e-9);
}

TEST(PrincipalDirectionTest, SinglePointGivesFirstBasisVector) {
  const std::vector<double> rows{0.3, 0.7, 0.1};
  EXPECT_EQ(principal_direction(rows, 3), (std::vector<double>{1, 0, 0}));
}

TEST(PrincipalDirectionTest, StartVectorOrthogonalToData) {
  // Variance only along (1,-1): orthogonal to the all-ones start vector.
  const std::vector<double> rows{0, 0, 1, -1, 2, -2, -1, 1};
  const auto v = principal_direction(rows, 2);
  EXPECT_NEAR(std::abs(v[0]), std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(std::abs(v[1]), std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(v[0], -v[1], 1e-9);
}

TEST(PrincipalDirectionTest, MatchesEigendecomposition) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> rows(100 * 5);
    const double scale[5] = {3.0, 1.0, 0.5, 0.3, 0.1};
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = rng.uniform(-1, 1) * scale[i % 5] + (i % 5 == 1 ? rows[i - 1] : 0.0);
    const auto v = principal_direction(rows, 5);
    const Eigen::VectorXd e = oracle::principal_direction(rows, 5);
    double cosine = 0;
    for (int i = 0; i < 5; ++i) cosine += v[i] * e[i];
    EXPECT_GE(std::abs(cosine), 1 - 1e-6);
    EXPECT_NEAR(dot(v, v), 1.0, 1e-9);
  }
}

TEST(SnnIndexTest, RejectsLinf) {
  EXPECT_THROW(SnnIndex(Schema::all_numeric(2), MetricSpec{.norm = Norm::kLinf}), ConfigError);
}

TEST(SnnIndexTest, EmptyIndex) {
  SnnIndex idx(Schema::all_numeric(2), MetricSpec{});
  idx.build({});
  IndexQueryStats stats;
  EXPECT_TRUE(idx.query({0, {0.5, 0.5}, "A"}, stats).empty());
  EXPECT_EQ(stats.comparisons, 0u);
}

TEST(SnnIndexTest, CollinearKeysArePositions) {
  std::vector<DecisionPoint> pts;
  for (PointId i = 0; i < 10; ++i) {
    const double t = 0.1 * static_cast<double>(i * 7 % 10);
    pts.push_back({i, {t * 0.6, t * 0.8}, "A"});
  }
  SnnIndex idx(Schema::all_numeric(2, -1, 2), MetricSpec{});
  idx.build(pts);
  const double k0 = idx.key(pts[0].features);
  for (const auto& p : pts) {
    const double t = std::hypot(p.features[0], p.features[1]);
    EXPECT_NEAR(std::abs(idx.key(p.features) - k0), t, 1e-9);
  }
}

TEST(SnnIndexTest, EntriesSortedAndUnitDirection) {
  const auto pts = gen_uniform(1000, 8, 2, 3);
  SnnIndex idx(Schema::all_numeric(8), MetricSpec{});
  idx.build(pts);
  EXPECT_NEAR(dot(idx.direction(), idx.direction()), 1.0, 1e-9);
  const auto& e = idx.entries();
  ASSERT_EQ(e.size(), 1000u);
  for (std::size_t i = 1; i < e.size(); ++i) {
    ASSERT_TRUE(e[i - 1].key < e[i].key || (e[i - 1].key == e[i].key && e[i - 1].id < e[i].id));
  }
  for (const auto& x : e) ASSERT_EQ(x.key, idx.key(pts[x.pos].features));
}

TEST(SnnIndexTest, FarQueryEvaluatesNothing) {
  const auto pts = gen_uniform(500, 3, 2, 3);
  SnnIndex idx(Schema::all_numeric(3, -1000, 1000), MetricSpec{.epsilon_x = 0.05});
  idx.build(pts);
  IndexQueryStats stats;
  EXPECT_TRUE(idx.query({900, {500, 500, 500}, "A"}, stats).empty());
  EXPECT_EQ(stats.comparisons, 0u);
}

TEST(SnnIndexTest, EqualsBruteForce) {
  for (std::size_t d : {2u, 8u, 24u}) {
    const Schema s = Schema::all_numeric(d);
    const MetricSpec spec{.norm = Norm::kL2, .epsilon_x = d == 2 ? 0.05 : 0.6};
    const auto pts = gen_uniform(1000, d, 2, d);
    SnnIndex idx(s, spec);
    idx.build(pts);
    for (auto q : gen_uniform(200, d, 2, 77 + d)) {
      q.id = 5000;
      IndexQueryStats stats;
      std::vector<PointId> expect;
      for (const auto& p : pts) {
        if (oracle::decision_distance(s, spec, p, q) <= spec.epsilon_x) expect.push_back(p.id);
      }
      ASSERT_EQ(idx.query(q, stats), expect);
      ASSERT_LE(stats.comparisons, pts.size());
    }
  }
}

TEST(SnnIndexTest, KeyDifferenceBoundedByDistance) {
  const Schema s = Schema::all_numeric(6);
  const auto pts = gen_uniform(2000, 6, 2, 12);
  SnnIndex idx(s, MetricSpec{});
  idx.build(pts);
  Rng rng(99);
  for (int t = 0; t < 100000; ++t) {
    const auto& a = pts[rng.below(pts.size())].features;
    const auto& b = pts[rng.below(pts.size())].features;
    ASSERT_LE(std::abs(idx.key(a) - idx.key(b)), input_distance(s, Norm::kL2, a, b) + 1e-9);
  }
}

}  // namespace
}  // namespace iormon
