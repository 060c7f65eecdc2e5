#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iormon/decision.hpp"
#include "iormon/metric.hpp"
#include "iormon/schema.hpp"

namespace iormon {

// Seedable generator with platform-independent output: mt19937_64 (whose
// sequence the standard fixes) plus explicit mappings to doubles/integers,
// since the standard distributions differ between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi);
  // Uniform in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Label tokens "0", "1", ..., "count-1".
std::vector<std::string> label_tokens(std::size_t count);

// n decisions with i.i.d. features uniform in [0, 1)^d and labels uniform
// over label_count tokens; ids 0..n-1. Uses Schema::all_numeric(d).
std::vector<DecisionPoint> gen_uniform(std::size_t n, std::size_t d, std::size_t label_count,
                                       std::uint64_t seed);

struct PlantedPair {
  PointId original = 0;
  PointId copy = 0;

  friend bool operator==(const PlantedPair&, const PlantedPair&) = default;
};

struct PlantedStream {
  std::vector<DecisionPoint> points;  // ids renumbered 0..
  std::vector<PlantedPair> truth;     // sorted by copy id
  std::size_t resamples = 0;
};

// Makes `stream` free of violations at epsilon by resampling offending
// decisions, then inserts `count` relabelled near-copies of distinct
// originals at random later positions. Each copy is within epsilon/2 of its
// original under `norm` and farther than epsilon (in L-infinity, hence in
// both norms) from every other decision with a different label, so the
// result has exactly `count` violating pairs: the planted ones.
//
// Numeric columns must be bounded. Throws GeneratorError when 100 * max(1,
// count) resamples do not suffice or fewer than two labels occur.
PlantedStream plant_violations(std::vector<DecisionPoint> stream, const Schema& schema, Norm norm,
                               std::size_t count, double epsilon, std::uint64_t seed);

}  // namespace iormon
