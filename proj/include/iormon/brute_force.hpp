#pragma once

#include <vector>

#include "iormon/monitor.hpp"

namespace iormon {

// Scans every stored decision; the reference every other backend is held to.
class BruteForceMonitor final : public Monitor {
 public:
  BruteForceMonitor(Schema schema, MetricSpec metric,
                    LabelFilter filter = LabelFilter::kDifferingLabels);

  std::string name() const override { return "bruteforce"; }
  MonitorCounters counters() const override;

  const std::vector<DecisionPoint>& points() const { return points_; }

 protected:
  std::vector<PointId> do_query(const DecisionPoint& p) override;
  void do_insert(const DecisionPoint& p) override;

 private:
  DecisionMatcher matcher_;
  std::vector<DecisionPoint> points_;
  MonitorCounters counters_;
};

// Ascending ids of the decisions in `points` that match `query`. Adds the
// number of examined decisions to `comparisons`.
std::vector<PointId> brute_force_search(std::span<const DecisionPoint> points,
                                        const DecisionPoint& query, const DecisionMatcher& matcher,
                                        std::uint64_t& comparisons);

}  // namespace iormon
