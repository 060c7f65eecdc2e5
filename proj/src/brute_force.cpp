#include "iormon/brute_force.hpp"

namespace iormon {

std::vector<PointId> brute_force_search(std::span<const DecisionPoint> points,
                                        const DecisionPoint& query, const DecisionMatcher& matcher,
                                        std::uint64_t& comparisons) {
  std::vector<PointId> out;
  for (const DecisionPoint& q : points) {
    if (matcher.matches(q, query)) out.push_back(q.id);
  }
  comparisons += points.size();
  return out;
}

BruteForceMonitor::BruteForceMonitor(Schema schema, MetricSpec metric, LabelFilter filter)
    : Monitor(std::move(schema), metric), matcher_(this->schema(), this->metric(), filter) {}

MonitorCounters BruteForceMonitor::counters() const {
  MonitorCounters c = counters_;
  c.points_stored = points_.size();
  return c;
}

std::vector<PointId> BruteForceMonitor::do_query(const DecisionPoint& p) {
  ++counters_.queries;
  // Points are appended in id order, so the result is already ascending.
  return brute_force_search(points_, p, matcher_, counters_.comparisons);
}

void BruteForceMonitor::do_insert(const DecisionPoint& p) { points_.push_back(p); }

}  // namespace iormon
