#include "iormon/bdd_monitor.hpp"

#include <algorithm>

#include "iormon/errors.hpp"

namespace iormon {

BddMonitor::BddMonitor(Schema schema, MetricSpec metric, LabelFilter filter,
                       BddMonitorOptions options)
    : Monitor(std::move(schema), metric),
      matcher_(this->schema(), this->metric(), filter),
      options_(options),
      grid_(this->schema(), this->metric().epsilon_x, options.order),
      mgr_(grid_.total_bits()) {
  if (this->metric().norm != Norm::kLinf) {
    throw ConfigError("the bdd backend supports only the linf norm");
  }
}

MonitorCounters BddMonitor::counters() const {
  MonitorCounters c = counters_;
  std::size_t stored = 0;
  for (const auto& [cell, points] : cells_) stored += points.size();
  c.points_stored = stored;
  c.bdd_nodes = mgr_.node_count();
  return c;
}

const LabelVector& BddMonitor::cell_of(const DecisionPoint& p) {
  if (!cached_ || cached_id_ != p.id) {
    cached_cell_ = grid_.discretize(p, options_.clamp);
    cached_id_ = p.id;
    cached_ = true;
  }
  return cached_cell_;
}

std::vector<PointId> BddMonitor::do_query(const DecisionPoint& p) {
  ++counters_.queries;
  const LabelVector cell = cell_of(p);
  const BddRef neighbors = neighbor_predicate(grid_, cell, mgr_);
  const BddRef candidates = mgr_.conjoin(seen_, neighbors);

  std::vector<PointId> out;
  if (candidates == BddManager::kFalse) {
    last_case_ = QueryCase::kA;
    ++counters_.case_a;
    return out;
  }

  if (candidates == mgr_.cube(grid_.encode(cell))) {
    last_case_ = QueryCase::kB;
    ++counters_.case_b;
    const auto& members = cells_.at(cell);
    for (const DecisionPoint& q : members) {
      // A clamped cell is wider than epsilon, so it needs the exact test.
      const bool hit = options_.clamp ? matcher_.matches(q, p) : matcher_.labels_qualify(q, p);
      if (hit) out.push_back(q.id);
    }
    counters_.comparisons += members.size();
    return out;
  }

  last_case_ = QueryCase::kC;
  ++counters_.case_c;
  mgr_.for_each_sat(candidates, grid_.variables(), [&](std::span<const std::uint8_t> bits) {
    auto it = cells_.find(grid_.decode(bits));
    if (it == cells_.end()) return;
    for (const DecisionPoint& q : it->second) {
      if (matcher_.matches(q, p)) out.push_back(q.id);
    }
    counters_.comparisons += it->second.size();
  });
  std::sort(out.begin(), out.end());
  return out;
}

void BddMonitor::do_insert(const DecisionPoint& p) {
  const LabelVector& cell = cell_of(p);
  seen_ = mgr_.disjoin(seen_, mgr_.cube(grid_.encode(cell)));
  cells_[cell].push_back(p);
  cached_ = false;
}

bool BddMonitor::check_consistency() const {
  std::vector<std::uint8_t> bits(grid_.total_bits());
  std::size_t satisfying = 0;
  bool ok = true;
  mgr_.for_each_sat(seen_, grid_.variables(), [&](std::span<const std::uint8_t> a) {
    ++satisfying;
    auto it = cells_.find(grid_.decode(a));
    if (it == cells_.end() || it->second.empty()) ok = false;
  });
  if (!ok || satisfying != cells_.size()) return false;
  for (const auto& [cell, points] : cells_) {
    for (const Literal& l : grid_.encode(cell)) bits[l.var] = l.value ? 1 : 0;
    if (!mgr_.eval(seen_, bits)) return false;
    for (const DecisionPoint& q : points) {
      if (grid_.discretize(q, options_.clamp) != cell) return false;
    }
  }
  return true;
}

}  // namespace iormon
