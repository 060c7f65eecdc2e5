#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iormon {

using PointId = std::uint64_t;

// One observed classifier decision: the input features and the emitted label.
struct DecisionPoint {
  PointId id = 0;
  std::vector<double> features;
  std::string label;
};

// Answer of a monitor for one new decision.
struct WitnessReport {
  PointId query_id = 0;
  std::vector<PointId> witness_ids;  // ascending

  bool violation() const { return !witness_ids.empty(); }
};

}  // namespace iormon
