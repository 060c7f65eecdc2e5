#include "iormon/run.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "iormon/errors.hpp"

namespace iormon {

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1) + 0.5);
  return v[std::min(idx, v.size() - 1)];
}

}  // namespace

std::string RunStats::summary_json() const {
  nlohmann::ordered_json j;
  j["backend"] = backend;
  j["tau"] = tau;
  j["seed"] = seed;
  j["steps"] = steps;
  j["violations"] = violations;
  j["witness_pairs"] = witness_pairs;
  const double total = std::accumulate(latency_ns.begin(), latency_ns.end(), 0.0);
  j["latency_ns"] = {
      {"mean", latency_ns.empty() ? 0.0 : total / static_cast<double>(latency_ns.size())},
      {"p50", percentile(latency_ns, 0.5)},
      {"p99", percentile(latency_ns, 0.99)},
      {"max", latency_ns.empty() ? 0.0 : *std::max_element(latency_ns.begin(), latency_ns.end())},
      {"rolling_last", rolling_ns.empty() ? 0.0 : rolling_ns.back()}};
  j["counters"] = {{"comparisons", counters.comparisons},
                   {"queries", counters.queries},
                   {"points_stored", counters.points_stored},
                   {"rebuilds", counters.rebuilds},
                   {"nodes_visited", counters.nodes_visited},
                   {"index_nodes", counters.index_nodes},
                   {"case_a", counters.case_a},
                   {"case_b", counters.case_b},
                   {"case_c", counters.case_c},
                   {"bdd_nodes", counters.bdd_nodes}};
  return j.dump();
}

RunStats run_stream(Monitor& monitor, std::span<const DecisionPoint> stream, const Schema& schema,
                    std::ostream& reports, bool full_witnesses, std::size_t window) {
  using Clock = std::chrono::steady_clock;
  RunStats stats;
  stats.backend = monitor.name();
  stats.latency_ns.reserve(stream.size());
  stats.rolling_ns.reserve(stream.size());
  window = std::max<std::size_t>(window, 1);
  double rolling_sum = 0.0;

  // Needed to echo witnesses; ids are the stream positions when loaded by ingest().
  std::vector<const DecisionPoint*> echo;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const DecisionPoint& p = stream[i];
    const auto start = Clock::now();
    const WitnessReport report = monitor.observe(p);
    const double ns = std::chrono::duration<double, std::nano>(Clock::now() - start).count();

    stats.latency_ns.push_back(ns);
    rolling_sum += ns;
    if (stats.latency_ns.size() > window) rolling_sum -= stats.latency_ns[stats.latency_ns.size() - 1 - window];
    stats.rolling_ns.push_back(rolling_sum /
                               static_cast<double>(std::min(window, stats.latency_ns.size())));
    ++stats.steps;
    if (report.violation()) ++stats.violations;
    stats.witness_pairs += report.witness_ids.size();

    echo.clear();
    if (full_witnesses) {
      for (PointId id : report.witness_ids) {
        auto it = std::lower_bound(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(i), id,
                                   [](const DecisionPoint& q, PointId v) { return q.id < v; });
        echo.push_back(&*it);
      }
    }
    reports << report_line(report, schema, echo) << '\n';
  }
  stats.counters = monitor.counters();
  return stats;
}

RunStats run(const RunConfig& config, std::ostream& reports) {
  MonitorConfig monitor_config = config.monitor;
  if (config.blocks_auto) monitor_config.blocks = 1;
  validate_combination(monitor_config);
  const Schema schema = load_schema(config.schema_path);
  if (config.blocks_auto) monitor_config.blocks = default_block_count(schema);
  validate(monitor_config, schema);

  const std::vector<DecisionPoint> stream = ingest_file(config.input_path, config.format, schema);

  if (config.tau_auto &&
      (monitor_config.backend == BackendKind::kKdTree || monitor_config.backend == BackendKind::kSnn)) {
    const StaticBackend backend = monitor_config.backend == BackendKind::kKdTree
                                      ? StaticBackend::kKdTree
                                      : StaticBackend::kSnn;
    monitor_config.tau = calibrate_tau(schema, monitor_config.metric, backend, stream, stream.size());
  }
  auto monitor = make_monitor(monitor_config, schema);

  RunStats stats;
  if (config.output_path.empty()) {
    stats = run_stream(*monitor, stream, schema, reports, config.full_witnesses, config.window);
  } else {
    std::ofstream out(config.output_path);
    if (!out) throw ConfigError("cannot write " + config.output_path.string());
    stats = run_stream(*monitor, stream, schema, out, config.full_witnesses, config.window);
  }
  stats.tau = monitor_config.tau;
  stats.seed = config.seed;
  return stats;
}

}  // namespace iormon
