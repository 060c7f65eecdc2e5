#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iormon/factory.hpp"
#include "iormon/stream_io.hpp"

namespace iormon {

struct RunConfig {
  MonitorConfig monitor;
  bool tau_auto = false;
  // Block-parallel with default_block_count(schema) blocks.
  bool blocks_auto = false;
  std::filesystem::path schema_path;
  std::filesystem::path input_path;
  std::filesystem::path output_path;  // empty: standard output
  StreamFormat format = StreamFormat::kCsv;
  bool full_witnesses = false;
  std::uint64_t seed = 0;
  std::size_t window = 1000;  // rolling-average window, in steps
};

struct RunStats {
  std::string backend;
  std::size_t tau = 0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::uint64_t violations = 0;  // reports with at least one witness
  std::uint64_t witness_pairs = 0;
  std::vector<double> latency_ns;  // per step
  std::vector<double> rolling_ns;  // rolling average of latency_ns
  MonitorCounters counters;

  // Summary (no per-step samples) as a single-line JSON object.
  std::string summary_json() const;
};

// Feeds `stream` through `monitor`, writing one report line per decision.
RunStats run_stream(Monitor& monitor, std::span<const DecisionPoint> stream, const Schema& schema,
                    std::ostream& reports, bool full_witnesses, std::size_t window);

// Validates the configuration, then loads schema and input and runs.
RunStats run(const RunConfig& config, std::ostream& reports);

}  // namespace iormon
