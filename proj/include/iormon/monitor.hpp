#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iormon/decision.hpp"
#include "iormon/metric.hpp"
#include "iormon/schema.hpp"

namespace iormon {

// Data-structure level instrumentation. All counters are cumulative over the
// lifetime of a monitor; per-step figures are differences between snapshots.
struct MonitorCounters {
  // Stored decisions examined by a query (label test and/or exact distance).
  std::uint64_t comparisons = 0;
  std::uint64_t queries = 0;
  std::uint64_t points_stored = 0;
  // Static-index rebuilds (periodic indexing).
  std::uint64_t rebuilds = 0;
  // Index nodes visited by queries and index nodes currently allocated.
  std::uint64_t nodes_visited = 0;
  std::uint64_t index_nodes = 0;
  // Grid/BDD monitor query outcomes.
  std::uint64_t case_a = 0;
  std::uint64_t case_b = 0;
  std::uint64_t case_c = 0;
  std::uint64_t bdd_nodes = 0;

  MonitorCounters& operator+=(const MonitorCounters& o);
};

// The online witness-search contract.
//
// observe(p) returns every previously observed decision q with
// decision_distance(q, p) <= epsilon and then stores p. Ids must strictly
// increase across calls. query() and insert() expose the two halves so a
// wrapper can put a barrier between them; observe() is query() then insert().
class Monitor {
 public:
  virtual ~Monitor() = default;

  Monitor(const Monitor&) = delete;
  Monitor& operator=(const Monitor&) = delete;

  WitnessReport observe(const DecisionPoint& p);

  // Witness ids of `p` among stored decisions, ascending. Does not store p.
  std::vector<PointId> query(const DecisionPoint& p);
  void insert(const DecisionPoint& p);

  // Stores history without reporting on it (warm start).
  void absorb(std::span<const DecisionPoint> history);

  virtual std::string name() const = 0;
  virtual MonitorCounters counters() const = 0;

  const Schema& schema() const { return schema_; }
  const MetricSpec& metric() const { return metric_; }
  std::optional<PointId> last_id() const { return last_id_; }

 protected:
  Monitor(Schema schema, MetricSpec metric);

  virtual std::vector<PointId> do_query(const DecisionPoint& p) = 0;
  virtual void do_insert(const DecisionPoint& p) = 0;

 private:
  void check_order(const DecisionPoint& p) const;

  Schema schema_;
  MetricSpec metric_;
  std::optional<PointId> last_id_;
};

}  // namespace iormon
