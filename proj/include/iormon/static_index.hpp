#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iormon/decision.hpp"
#include "iormon/metric.hpp"

namespace iormon {

struct IndexQueryStats {
  std::uint64_t comparisons = 0;
  std::uint64_t nodes_visited = 0;
};

// A one-shot FRNN index over a fixed set of decisions.
//
// build() keeps a view of `points`; the caller must leave that storage
// untouched until the next build(). Queries on a built index are const and
// may run concurrently.
class StaticIndex {
 public:
  virtual ~StaticIndex() = default;

  virtual void build(std::span<const DecisionPoint> points) = 0;
  // Ascending ids of indexed decisions matching `q` under the index's matcher.
  virtual std::vector<PointId> query(const DecisionPoint& q, IndexQueryStats& stats) const = 0;

  virtual std::size_t size() const = 0;
  virtual std::size_t node_count() const = 0;
  virtual std::string name() const = 0;
};

enum class StaticBackend { kKdTree, kSnn };

std::unique_ptr<StaticIndex> make_static_index(StaticBackend backend, const Schema& schema,
                                               const MetricSpec& metric, LabelFilter filter);

}  // namespace iormon
