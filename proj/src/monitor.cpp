#include "iormon/monitor.hpp"

#include "iormon/errors.hpp"

namespace iormon {

MonitorCounters& MonitorCounters::operator+=(const MonitorCounters& o) {
  comparisons += o.comparisons;
  queries += o.queries;
  points_stored += o.points_stored;
  rebuilds += o.rebuilds;
  nodes_visited += o.nodes_visited;
  index_nodes += o.index_nodes;
  case_a += o.case_a;
  case_b += o.case_b;
  case_c += o.case_c;
  bdd_nodes += o.bdd_nodes;
  return *this;
}

Monitor::Monitor(Schema schema, MetricSpec metric)
    : schema_(std::move(schema)), metric_(metric) {
  metric_.validate();
}

void Monitor::check_order(const DecisionPoint& p) const {
  if (last_id_ && p.id <= *last_id_) {
    throw StreamOrderError("decision id " + std::to_string(p.id) +
                           " does not exceed previous id " + std::to_string(*last_id_));
  }
}

WitnessReport Monitor::observe(const DecisionPoint& p) {
  WitnessReport report{.query_id = p.id, .witness_ids = query(p)};
  insert(p);
  return report;
}

std::vector<PointId> Monitor::query(const DecisionPoint& p) {
  check_order(p);
  check_conforms(schema_, p);
  return do_query(p);
}

void Monitor::insert(const DecisionPoint& p) {
  check_order(p);
  check_conforms(schema_, p);
  do_insert(p);
  last_id_ = p.id;
}

void Monitor::absorb(std::span<const DecisionPoint> history) {
  for (const DecisionPoint& p : history) insert(p);
}

}  // namespace iormon
