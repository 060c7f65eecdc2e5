#pragma once

#include <cstdint>
#include <vector>

#include "iormon/static_index.hpp"

namespace iormon {

struct KdTreeOptions {
  std::size_t leaf_capacity = 16;
};

// Static k-d tree over the numeric columns of a decision set.
//
// Splits at the median of the dimension with the largest spread; every node
// keeps the tight bounding box of its points, and a query skips a subtree
// whose box is farther than epsilon from the query under the configured norm.
// Categorical columns and labels are checked only when collecting results.
class KdTree final : public StaticIndex {
 public:
  struct Node {
    std::uint32_t begin = 0;  // range into the leaf-order permutation
    std::uint32_t end = 0;
    std::int32_t left = -1;  // -1 for leaves
    std::int32_t right = -1;
    std::uint32_t split_dim = 0;  // index into the numeric columns
    double split_value = 0.0;

    bool leaf() const { return left < 0; }
  };

  KdTree(const Schema& schema, const MetricSpec& metric,
         LabelFilter filter = LabelFilter::kDifferingLabels, KdTreeOptions options = {});

  void build(std::span<const DecisionPoint> points) override;
  std::vector<PointId> query(const DecisionPoint& q, IndexQueryStats& stats) const override;

  std::size_t size() const override { return points_.size(); }
  std::size_t node_count() const override { return nodes_.size(); }
  std::string name() const override { return "kdtree"; }

  const std::vector<Node>& nodes() const { return nodes_; }
  // Ids stored in the leaves, in leaf order.
  std::vector<PointId> leaf_ids() const;
  // Verifies split ordering, bounding boxes and leaf ranges.
  bool check_invariants() const;

 private:
  double coord(std::uint32_t pos, std::size_t dim) const;
  std::int32_t build_range(std::uint32_t begin, std::uint32_t end);
  double box_distance(std::size_t node, std::span<const double> q) const;

  DecisionMatcher matcher_;
  KdTreeOptions options_;
  std::vector<std::size_t> numeric_;
  std::span<const DecisionPoint> points_;
  std::vector<std::uint32_t> order_;  // positions into points_
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;  // nodes x numeric dims
  std::vector<double> box_hi_;
};

}  // namespace iormon
