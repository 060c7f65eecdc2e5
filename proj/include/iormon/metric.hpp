#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iormon/decision.hpp"
#include "iormon/schema.hpp"

namespace iormon {

enum class Norm { kL2, kLinf };

std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MetricSpec {
  Norm norm = Norm::kL2;
  double epsilon_x = 0.1;
  // Output threshold. Labels use the discrete metric, so any value in (0, 1)
  // means "labels differ".
  double delta_z = 0.5;

  // Throws ConfigError when a threshold is not positive.
  void validate() const;
};

// Which stored decisions a backend may report. Monitors use kDifferingLabels;
// kNone turns a backend into a plain FRNN search over inputs, which is how
// the block-parallel wrapper drives its sub-monitors.
enum class LabelFilter { kDifferingLabels, kNone };

// Distance over input features. Categorical mismatch on a non-ignored column
// gives +inf; ignored columns contribute nothing.
double input_distance(const Schema& schema, Norm norm, std::span<const double> a,
                      std::span<const double> b);

// Discrete metric on labels.
double output_distance(std::string_view z1, std::string_view z2);

// Augmented metric: input distance when the outputs are delta-far, +inf otherwise.
double decision_distance(const MetricSpec& spec, const Schema& schema, const DecisionPoint& p,
                         const DecisionPoint& q);

// Precomputed form of the witness test used on every hot path.
//
// matches(stored, query) is exactly decision_distance(spec, schema, stored,
// query) <= epsilon_x (or the input-only variant under LabelFilter::kNone),
// evaluated label first, then categorical columns, then numeric columns.
class DecisionMatcher {
 public:
  DecisionMatcher(const Schema& schema, const MetricSpec& spec,
                  LabelFilter filter = LabelFilter::kDifferingLabels);

  bool labels_qualify(const DecisionPoint& a, const DecisionPoint& b) const;
  bool categories_equal(std::span<const double> a, std::span<const double> b) const;
  // Norm over numeric columns only.
  double numeric_distance(std::span<const double> a, std::span<const double> b) const;
  bool matches(const DecisionPoint& stored, const DecisionPoint& query) const;

  const MetricSpec& spec() const { return spec_; }
  LabelFilter filter() const { return filter_; }
  const std::vector<std::size_t>& numeric_columns() const { return numeric_; }

 private:
  std::vector<std::size_t> numeric_;
  std::vector<std::size_t> categorical_;
  MetricSpec spec_;
  LabelFilter filter_;
};

// Checks that `p` has one feature per schema column.
void check_conforms(const Schema& schema, const DecisionPoint& p);

}  // namespace iormon
