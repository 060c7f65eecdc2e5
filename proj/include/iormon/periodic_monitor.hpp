#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "iormon/monitor.hpp"
#include "iormon/static_index.hpp"

namespace iormon {

inline constexpr std::size_t kDefaultTau = 4096;

// Online monitor built from a static index.
//
// Decisions live in a long-term memory covered by the static index and a
// short-term buffer searched by brute force. When the buffer reaches tau
// entries it is moved into long-term memory and the index is rebuilt from
// scratch, at the end of the insert that filled it.
class PeriodicMonitor final : public Monitor {
 public:
  PeriodicMonitor(Schema schema, MetricSpec metric, StaticBackend backend,
                  std::size_t tau = kDefaultTau,
                  LabelFilter filter = LabelFilter::kDifferingLabels);

  std::string name() const override;
  MonitorCounters counters() const override;

  std::size_t tau() const { return tau_; }
  std::size_t long_term_size() const { return long_term_.size(); }
  std::size_t short_term_size() const { return short_term_.size(); }
  const StaticIndex& long_term_index() const { return *index_; }
  const std::vector<DecisionPoint>& long_term() const { return long_term_; }

 protected:
  std::vector<PointId> do_query(const DecisionPoint& p) override;
  void do_insert(const DecisionPoint& p) override;

 private:
  DecisionMatcher matcher_;
  StaticBackend backend_;
  std::size_t tau_;
  std::vector<DecisionPoint> long_term_;
  std::vector<DecisionPoint> short_term_;
  std::unique_ptr<StaticIndex> index_;
  MonitorCounters counters_;
};

using CostFunction = std::function<double(double)>;

// Amortised per-step cost of periodic indexing with period tau on a history
// of n decisions: (f(n + tau) + tau * g(n) + sum_{i=1..tau} h(i)) / tau, where
// f is the index build cost, g the long-term query cost and h the buffer scan
// cost.
double amortized_cost(std::size_t tau, std::size_t n, const CostFunction& build,
                      const CostFunction& long_query, const CostFunction& short_query);

// Candidate minimising amortized_cost; the first one wins ties.
std::size_t best_tau(std::span<const std::size_t> candidates, std::size_t n,
                     const CostFunction& build, const CostFunction& long_query,
                     const CostFunction& short_query);

// Power-of-two grid 1, 2, 4, ... up to and including the first value >= limit.
std::vector<std::size_t> tau_grid(std::size_t limit);

// Chooses tau by timing index builds, index queries and brute-force scans on
// `sample`, fitting power laws to the build/query timings and minimising
// amortized_cost for a history of `horizon` decisions.
std::size_t calibrate_tau(const Schema& schema, const MetricSpec& metric, StaticBackend backend,
                          std::span<const DecisionPoint> sample, std::size_t horizon);

}  // namespace iormon
