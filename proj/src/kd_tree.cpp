#include "iormon/kd_tree.hpp"

#include <algorithm>
#include <cmath>

#include "iormon/errors.hpp"

namespace iormon {

KdTree::KdTree(const Schema& schema, const MetricSpec& metric, LabelFilter filter,
               KdTreeOptions options)
    : matcher_(schema, metric, filter), options_(options), numeric_(schema.numeric_columns()) {
  if (options_.leaf_capacity == 0) throw ConfigError("k-d tree leaf capacity must be positive");
}

double KdTree::coord(std::uint32_t pos, std::size_t dim) const {
  return points_[pos].features[numeric_[dim]];
}

void KdTree::build(std::span<const DecisionPoint> points) {
  points_ = points;
  nodes_.clear();
  box_lo_.clear();
  box_hi_.clear();
  order_.resize(points.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!points.empty()) build_range(0, static_cast<std::uint32_t>(points.size()));
}

std::int32_t KdTree::build_range(std::uint32_t begin, std::uint32_t end) {
  const std::size_t dims = numeric_.size();
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{.begin = begin, .end = end});
  box_lo_.resize(box_lo_.size() + dims, kInfinity);
  box_hi_.resize(box_hi_.size() + dims, -kInfinity);

  double* lo = box_lo_.data() + static_cast<std::size_t>(self) * dims;
  double* hi = box_hi_.data() + static_cast<std::size_t>(self) * dims;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double v = coord(order_[i], d);
      lo[d] = std::min(lo[d], v);
      hi[d] = std::max(hi[d], v);
    }
  }

  std::size_t split_dim = 0;
  double spread = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    if (hi[d] - lo[d] > spread) {
      spread = hi[d] - lo[d];
      split_dim = d;
    }
  }
  if (end - begin <= options_.leaf_capacity || spread == 0.0) return self;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(a, split_dim);
                     const double cb = coord(b, split_dim);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split_value = coord(order_[mid], split_dim);

  const std::int32_t left = build_range(begin, mid);
  const std::int32_t right = build_range(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(self)];
  node.left = left;
  node.right = right;
  node.split_dim = static_cast<std::uint32_t>(split_dim);
  node.split_value = split_value;
  return self;
}

// Lower bound on the distance from q to any point in the node's box. Uses the
// same accumulation order as DecisionMatcher::numeric_distance, so it never
// exceeds the computed distance of a point inside the box.
double KdTree::box_distance(std::size_t node, std::span<const double> q) const {
  const std::size_t dims = numeric_.size();
  const double* lo = box_lo_.data() + node * dims;
  const double* hi = box_hi_.data() + node * dims;
  const bool l2 = matcher_.spec().norm == Norm::kL2;
  double acc = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    double gap = 0.0;
    if (q[d] < lo[d]) {
      gap = lo[d] - q[d];
    } else if (q[d] > hi[d]) {
      gap = q[d] - hi[d];
    }
    if (l2) {
      acc += gap * gap;
    } else {
      acc = std::max(acc, gap);
    }
  }
  return l2 ? std::sqrt(acc) : acc;
}

std::vector<PointId> KdTree::query(const DecisionPoint& q, IndexQueryStats& stats) const {
  std::vector<PointId> out;
  if (nodes_.empty()) return out;

  std::vector<double> qn(numeric_.size());
  for (std::size_t d = 0; d < numeric_.size(); ++d) qn[d] = q.features[numeric_[d]];
  const double eps = matcher_.spec().epsilon_x;

  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const auto idx = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    ++stats.nodes_visited;
    if (box_distance(idx, qn) > eps) continue;
    const Node& node = nodes_[idx];
    if (node.leaf()) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const DecisionPoint& p = points_[order_[i]];
        if (matcher_.matches(p, q)) out.push_back(p.id);
      }
      stats.comparisons += node.end - node.begin;
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointId> KdTree::leaf_ids() const {
  std::vector<PointId> ids;
  for (const Node& n : nodes_) {
    if (!n.leaf()) continue;
    for (std::uint32_t i = n.begin; i < n.end; ++i) ids.push_back(points_[order_[i]].id);
  }
  return ids;
}

bool KdTree::check_invariants() const {
  if (nodes_.empty()) return points_.empty();
  const std::size_t dims = numeric_.size();
  std::size_t covered = 0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const Node& node = nodes_[n];
    if (node.begin >= node.end) return false;
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double v = coord(order_[i], d);
        if (v < box_lo_[n * dims + d] || v > box_hi_[n * dims + d]) return false;
      }
    }
    if (node.leaf()) {
      covered += node.end - node.begin;
      continue;
    }
    const Node& l = nodes_[static_cast<std::size_t>(node.left)];
    const Node& r = nodes_[static_cast<std::size_t>(node.right)];
    if (l.begin != node.begin || l.end != r.begin || r.end != node.end) return false;
    for (std::uint32_t i = l.begin; i < l.end; ++i) {
      if (coord(order_[i], node.split_dim) > node.split_value) return false;
    }
    for (std::uint32_t i = r.begin; i < r.end; ++i) {
      if (coord(order_[i], node.split_dim) < node.split_value) return false;
    }
  }
  return covered == points_.size();
}

}  // namespace iormon
