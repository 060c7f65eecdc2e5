#include "iormon/factory.hpp"

#include <algorithm>
#include <thread>

#include "iormon/bdd_monitor.hpp"
#include "iormon/brute_force.hpp"
#include "iormon/errors.hpp"
#include "iormon/parallel_monitor.hpp"

namespace iormon {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kBruteForce:
      return "bruteforce";
    case BackendKind::kKdTree:
      return "kdtree";
    case BackendKind::kSnn:
      return "snn";
    case BackendKind::kBdd:
      return "bdd";
  }
  return "?";
}

BackendKind parse_backend(std::string_view text) {
  if (text == "bruteforce") return BackendKind::kBruteForce;
  if (text == "kdtree") return BackendKind::kKdTree;
  if (text == "snn") return BackendKind::kSnn;
  if (text == "bdd") return BackendKind::kBdd;
  throw ConfigError("unknown backend '" + std::string(text) +
                    "' (expected bruteforce, kdtree, snn or bdd)");
}

std::size_t default_block_count(const Schema& schema) {
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(schema.numeric_columns().size(), threads));
}

void validate_combination(const MonitorConfig& config) {
  config.metric.validate();
  if (config.tau == 0) throw ConfigError("tau must be at least 1");
  if (config.backend == BackendKind::kSnn && config.metric.norm != Norm::kL2) {
    throw ConfigError("the snn backend supports only the l2 norm");
  }
  if (config.backend == BackendKind::kBdd && config.metric.norm != Norm::kLinf) {
    throw ConfigError("the bdd backend supports only the linf norm");
  }
  if (config.blocks && config.metric.norm != Norm::kLinf) {
    throw ConfigError("block-parallel monitoring requires the linf norm");
  }
}

void validate(const MonitorConfig& config, const Schema& schema) {
  validate_combination(config);
  if (config.backend == BackendKind::kBdd) {
    for (std::size_t c : schema.numeric_columns()) {
      if (!schema.column(c).bounded()) {
        throw ConfigError("the bdd backend needs finite bounds for numeric column '" +
                          schema.column(c).name + "'");
      }
    }
  }
  if (config.blocks) {
    const std::size_t numeric = schema.numeric_columns().size();
    if (*config.blocks == 0 || *config.blocks > numeric) {
      throw ConfigError("block count must be between 1 and the number of numeric columns (" +
                        std::to_string(numeric) + ")");
    }
  }
}

std::unique_ptr<Monitor> make_backend(const MonitorConfig& config, const Schema& schema,
                                      LabelFilter filter) {
  switch (config.backend) {
    case BackendKind::kBruteForce:
      return std::make_unique<BruteForceMonitor>(schema, config.metric, filter);
    case BackendKind::kKdTree:
      return std::make_unique<PeriodicMonitor>(schema, config.metric, StaticBackend::kKdTree,
                                               config.tau, filter);
    case BackendKind::kSnn:
      return std::make_unique<PeriodicMonitor>(schema, config.metric, StaticBackend::kSnn,
                                               config.tau, filter);
    case BackendKind::kBdd:
      return std::make_unique<BddMonitor>(schema, config.metric, filter,
                                          BddMonitorOptions{.clamp = config.clamp});
  }
  throw ConfigError("unknown backend");
}

std::unique_ptr<Monitor> make_monitor(const MonitorConfig& config, const Schema& schema) {
  validate(config, schema);
  if (!config.blocks) return make_backend(config, schema, LabelFilter::kDifferingLabels);
  MonitorConfig inner = config;
  inner.blocks.reset();
  return std::make_unique<ParallelMonitor>(
      schema, config.metric, *config.blocks,
      [inner](Schema block, MetricSpec metric, LabelFilter filter) {
        MonitorConfig sub = inner;
        sub.metric = metric;
        return make_backend(sub, block, filter);
      });
}

}  // namespace iormon
