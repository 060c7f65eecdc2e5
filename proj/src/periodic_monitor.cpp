#include "iormon/periodic_monitor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "iormon/brute_force.hpp"
#include "iormon/errors.hpp"

namespace iormon {

PeriodicMonitor::PeriodicMonitor(Schema schema, MetricSpec metric, StaticBackend backend,
                                 std::size_t tau, LabelFilter filter)
    : Monitor(std::move(schema), metric),
      matcher_(this->schema(), this->metric(), filter),
      backend_(backend),
      tau_(tau),
      index_(make_static_index(backend, this->schema(), this->metric(), filter)) {
  if (tau_ == 0) throw ConfigError("tau must be at least 1");
  short_term_.reserve(std::min<std::size_t>(tau_, 1 << 16));
  index_->build(long_term_);
}

std::string PeriodicMonitor::name() const {
  return backend_ == StaticBackend::kKdTree ? "kdtree" : "snn";
}

MonitorCounters PeriodicMonitor::counters() const {
  MonitorCounters c = counters_;
  c.points_stored = long_term_.size() + short_term_.size();
  c.index_nodes = index_->node_count();
  return c;
}

std::vector<PointId> PeriodicMonitor::do_query(const DecisionPoint& p) {
  ++counters_.queries;
  IndexQueryStats stats;
  std::vector<PointId> out = index_->query(p, stats);
  counters_.comparisons += stats.comparisons;
  counters_.nodes_visited += stats.nodes_visited;
  // Every buffered id is newer than every long-term id, so appending keeps
  // the result ascending.
  std::vector<PointId> recent = brute_force_search(short_term_, p, matcher_, counters_.comparisons);
  out.insert(out.end(), recent.begin(), recent.end());
  return out;
}

void PeriodicMonitor::do_insert(const DecisionPoint& p) {
  short_term_.push_back(p);
  if (short_term_.size() < tau_) return;
  long_term_.insert(long_term_.end(), std::make_move_iterator(short_term_.begin()),
                    std::make_move_iterator(short_term_.end()));
  short_term_.clear();
  index_->build(long_term_);
  ++counters_.rebuilds;
}

double amortized_cost(std::size_t tau, std::size_t n, const CostFunction& build,
                      const CostFunction& long_query, const CostFunction& short_query) {
  if (tau == 0) throw ConfigError("tau must be at least 1");
  const auto t = static_cast<double>(tau);
  double scans = 0.0;
  for (std::size_t i = 1; i <= tau; ++i) scans += short_query(static_cast<double>(i));
  return (build(static_cast<double>(n + tau)) + t * long_query(static_cast<double>(n)) + scans) /
         t;
}

std::size_t best_tau(std::span<const std::size_t> candidates, std::size_t n,
                     const CostFunction& build, const CostFunction& long_query,
                     const CostFunction& short_query) {
  if (candidates.empty()) throw ConfigError("no tau candidates");
  std::size_t best = candidates.front();
  double best_cost = kInfinity;
  for (std::size_t tau : candidates) {
    const double cost = amortized_cost(tau, n, build, long_query, short_query);
    if (cost < best_cost) {
      best_cost = cost;
      best = tau;
    }
  }
  return best;
}

std::vector<std::size_t> tau_grid(std::size_t limit) {
  std::vector<std::size_t> grid{1};
  while (grid.back() < limit) grid.push_back(grid.back() * 2);
  return grid;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct PowerLaw {
  double scale = 0.0;
  double exponent = 1.0;

  double operator()(double x) const { return scale * std::pow(std::max(x, 1.0), exponent); }
};

// Fits cost = scale * size^exponent through two measurements.
PowerLaw fit(double small_size, double small_cost, double large_size, double large_cost) {
  PowerLaw law;
  if (small_cost > 0.0 && large_cost > 0.0 && large_size > small_size) {
    law.exponent = std::clamp(std::log(large_cost / small_cost) / std::log(large_size / small_size),
                              0.0, 2.0);
  }
  law.scale = large_cost / std::pow(large_size, law.exponent);
  return law;
}

struct IndexTiming {
  double build = 0.0;
  double query = 0.0;  // per query
};

IndexTiming time_index(StaticIndex& index, std::span<const DecisionPoint> points,
                       std::span<const DecisionPoint> probes) {
  IndexTiming t;
  auto start = Clock::now();
  index.build(points);
  t.build = seconds_since(start);
  IndexQueryStats stats;
  start = Clock::now();
  for (const DecisionPoint& q : probes) (void)index.query(q, stats);
  t.query = seconds_since(start) / static_cast<double>(std::max<std::size_t>(probes.size(), 1));
  return t;
}

}  // namespace

std::size_t calibrate_tau(const Schema& schema, const MetricSpec& metric, StaticBackend backend,
                          std::span<const DecisionPoint> sample, std::size_t horizon) {
  constexpr std::size_t kMaxSample = 8192;
  constexpr std::size_t kProbes = 64;
  if (sample.size() < 64) return kDefaultTau;

  const std::size_t large = std::min(sample.size(), kMaxSample);
  const std::size_t small = large / 4;
  const std::span<const DecisionPoint> probes = sample.first(std::min(kProbes, large));

  auto index = make_static_index(backend, schema, metric, LabelFilter::kDifferingLabels);
  const IndexTiming at_small = time_index(*index, sample.first(small), probes);
  const IndexTiming at_large = time_index(*index, sample.first(large), probes);

  const DecisionMatcher matcher(schema, metric);
  std::uint64_t comparisons = 0;
  const auto start = Clock::now();
  for (const DecisionPoint& q : probes) (void)brute_force_search(sample.first(large), q, matcher, comparisons);
  const double per_comparison = seconds_since(start) / static_cast<double>(std::max<std::uint64_t>(comparisons, 1));

  const PowerLaw build = fit(static_cast<double>(small), at_small.build,
                             static_cast<double>(large), at_large.build);
  const PowerLaw query = fit(static_cast<double>(small), at_small.query,
                             static_cast<double>(large), at_large.query);
  const auto scan = [per_comparison](double i) { return per_comparison * i; };

  const std::size_t n = std::max<std::size_t>(horizon / 2, 1);
  const std::vector<std::size_t> grid = tau_grid(std::max<std::size_t>(horizon, 1));
  return best_tau(grid, n, build, query, scan);
}

}  // namespace iormon
