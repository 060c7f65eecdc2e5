#pragma once

#include <unordered_map>
#include <vector>

#include "iormon/bdd.hpp"
#include "iormon/grid.hpp"
#include "iormon/monitor.hpp"

namespace iormon {

struct BddMonitorOptions {
  // Map out-of-range values to the boundary cell instead of rejecting them.
  bool clamp = false;
  GridOrder order = GridOrder::kColumnMajor;
};

// Two-level L-infinity monitor.
//
// The top level keeps the set of occupied grid cells as a BDD and intersects
// it with the query's neighbourhood (same or adjacent cell in every numeric
// column, same token in every categorical one). The outcome decides the
// bottom level:
//   (a) no occupied neighbour cell: nothing to report;
//   (b) only the query's own cell is occupied: every stored decision of that
//       cell is within epsilon, so only labels are checked;
//   (c) otherwise: exact search over the decisions of every occupied
//       neighbour cell, which drops adjacent-cell points that are too far.
class BddMonitor final : public Monitor {
 public:
  enum class QueryCase { kNone, kA, kB, kC };

  BddMonitor(Schema schema, MetricSpec metric, LabelFilter filter = LabelFilter::kDifferingLabels,
             BddMonitorOptions options = {});

  std::string name() const override { return "bdd"; }
  MonitorCounters counters() const override;

  const GridSpec& grid() const { return grid_; }
  const BddManager& manager() const { return mgr_; }
  BddRef seen() const { return seen_; }
  QueryCase last_case() const { return last_case_; }
  std::size_t occupied_cells() const { return cells_.size(); }

  // seen(encode(v)) holds exactly for the cells holding stored decisions, and
  // every stored decision sits in the cell it discretises to.
  bool check_consistency() const;

 protected:
  std::vector<PointId> do_query(const DecisionPoint& p) override;
  void do_insert(const DecisionPoint& p) override;

 private:
  const LabelVector& cell_of(const DecisionPoint& p);

  DecisionMatcher matcher_;
  BddMonitorOptions options_;
  GridSpec grid_;
  BddManager mgr_;
  BddRef seen_ = BddManager::kFalse;
  std::unordered_map<LabelVector, std::vector<DecisionPoint>, LabelVectorHash> cells_;
  QueryCase last_case_ = QueryCase::kNone;
  MonitorCounters counters_;

  // Discretisation of the most recent query, reused by the following insert.
  PointId cached_id_ = 0;
  bool cached_ = false;
  LabelVector cached_cell_;
};

}  // namespace iormon
