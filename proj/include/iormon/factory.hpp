#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "iormon/monitor.hpp"
#include "iormon/periodic_monitor.hpp"

namespace iormon {

enum class BackendKind { kBruteForce, kKdTree, kSnn, kBdd };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend(std::string_view text);

struct MonitorConfig {
  BackendKind backend = BackendKind::kBruteForce;
  MetricSpec metric;
  // Rebuild period of the kdtree and snn backends.
  std::size_t tau = kDefaultTau;
  // Wrap the backend in the block-parallel monitor with this many blocks.
  std::optional<std::size_t> blocks;
  // Grid backend: clamp out-of-range values instead of failing.
  bool clamp = false;
};

// Default block count: min(#numeric columns, hardware threads).
std::size_t default_block_count(const Schema& schema);

// Backend/norm/blocks compatibility checks that need no schema.
void validate_combination(const MonitorConfig& config);

// Rejects incompatible combinations (snn needs l2; bdd and block-parallel
// need linf; bdd needs bounded numeric columns; ...). Touches no data.
void validate(const MonitorConfig& config, const Schema& schema);

std::unique_ptr<Monitor> make_monitor(const MonitorConfig& config, const Schema& schema);

// Unwrapped backend with an explicit label filter.
std::unique_ptr<Monitor> make_backend(const MonitorConfig& config, const Schema& schema,
                                      LabelFilter filter);

}  // namespace iormon
