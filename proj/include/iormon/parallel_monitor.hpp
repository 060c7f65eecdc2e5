#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "iormon/monitor.hpp"
#include "iormon/worker_pool.hpp"

namespace iormon {

// Builds the monitor of one block. The block schema holds only that block's
// numeric columns; the filter is always LabelFilter::kNone.
using SubMonitorFactory =
    std::function<std::unique_ptr<Monitor>(Schema block_schema, MetricSpec metric, LabelFilter)>;

// Splits `numeric` into k contiguous groups whose sizes differ by at most one,
// larger groups first.
std::vector<std::vector<std::size_t>> partition_columns(const std::vector<std::size_t>& numeric,
                                                        std::size_t k);

// Keeps only `cols` of p's features; id and label are preserved.
DecisionPoint project(const DecisionPoint& p, std::span<const std::size_t> cols);

// L-infinity monitor that searches k column blocks independently.
//
// Under L-infinity two points are epsilon-close iff they are close on every
// column block, so the witnesses are the ids every block reports. Block
// monitors search inputs only; categorical columns form one more block that
// matches by equality, and the label test runs once on the intersection.
// All block queries finish before any block stores the new decision.
class ParallelMonitor final : public Monitor {
 public:
  ParallelMonitor(Schema schema, MetricSpec metric, std::size_t blocks,
                  const SubMonitorFactory& factory,
                  LabelFilter filter = LabelFilter::kDifferingLabels);
  ~ParallelMonitor() override;

  std::string name() const override;
  MonitorCounters counters() const override;

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  const Monitor& block_monitor(std::size_t i) const { return *subs_.at(i); }
  // Per-block candidate ids of the most recent query.
  const std::vector<std::vector<PointId>>& last_block_candidates() const { return last_candidates_; }

 protected:
  std::vector<PointId> do_query(const DecisionPoint& p) override;
  void do_insert(const DecisionPoint& p) override;

 private:
  const DecisionPoint& stored(PointId id) const;

  DecisionMatcher matcher_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::unique_ptr<Monitor>> subs_;
  std::vector<std::size_t> categorical_;
  std::map<std::vector<double>, std::vector<PointId>> by_category_;
  std::vector<DecisionPoint> points_;
  std::vector<std::vector<PointId>> last_candidates_;
  WorkerPool pool_;
  MonitorCounters counters_;
};

}  // namespace iormon
