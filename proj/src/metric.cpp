#include "iormon/metric.hpp"

#include <algorithm>
#include <cmath>

#include "iormon/errors.hpp"

namespace iormon {

std::string_view to_string(Norm norm) { return norm == Norm::kL2 ? "l2" : "linf"; }

Norm parse_norm(std::string_view text) {
  if (text == "l2" || text == "L2") return Norm::kL2;
  if (text == "linf" || text == "Linf" || text == "LINF") return Norm::kLinf;
  throw ConfigError("unknown norm '" + std::string(text) + "' (expected l2 or linf)");
}

void MetricSpec::validate() const {
  if (!(epsilon_x > 0.0) || !std::isfinite(epsilon_x)) {
    throw ConfigError("epsilon must be a positive finite number");
  }
  if (!(delta_z > 0.0)) throw ConfigError("delta_z must be positive");
}

void check_conforms(const Schema& schema, const DecisionPoint& p) {
  if (p.features.size() != schema.dimension()) {
    throw SchemaError("decision " + std::to_string(p.id) + " has " +
                      std::to_string(p.features.size()) + " features, schema declares " +
                      std::to_string(schema.dimension()));
  }
  for (std::size_t c = 0; c < schema.dimension(); ++c) {
    const Column& col = schema.column(c);
    const double v = p.features[c];
    if (col.kind == ColumnKind::kNumeric && std::isnan(v)) {
      throw SchemaError("decision " + std::to_string(p.id) + " has NaN in column '" + col.name + "'");
    }
    if (col.kind == ColumnKind::kCategorical &&
        !(v >= 0.0 && v < static_cast<double>(col.categories.size()) && v == std::floor(v))) {
      throw SchemaError("decision " + std::to_string(p.id) + " has no valid category in column '" +
                        col.name + "'");
    }
  }
}

namespace {

void check_dims(const Schema& schema, std::span<const double> a, std::span<const double> b) {
  if (a.size() != schema.dimension() || b.size() != schema.dimension()) {
    throw SchemaError("feature vector length does not match schema dimension " +
                      std::to_string(schema.dimension()));
  }
}

}  // namespace

double input_distance(const Schema& schema, Norm norm, std::span<const double> a,
                      std::span<const double> b) {
  check_dims(schema, a, b);
  for (std::size_t c : schema.categorical_columns()) {
    if (a[c] != b[c]) return kInfinity;
  }
  double acc = 0.0;
  for (std::size_t c : schema.numeric_columns()) {
    const double diff = std::abs(a[c] - b[c]);
    if (norm == Norm::kL2) {
      acc += diff * diff;
    } else {
      acc = std::max(acc, diff);
    }
  }
  return norm == Norm::kL2 ? std::sqrt(acc) : acc;
}

double output_distance(std::string_view z1, std::string_view z2) { return z1 == z2 ? 0.0 : 1.0; }

double decision_distance(const MetricSpec& spec, const Schema& schema, const DecisionPoint& p,
                         const DecisionPoint& q) {
  check_dims(schema, p.features, q.features);
  // Strict: outputs exactly delta_z apart are still considered close.
  if (!(output_distance(p.label, q.label) > spec.delta_z)) return kInfinity;
  return input_distance(schema, spec.norm, p.features, q.features);
}

DecisionMatcher::DecisionMatcher(const Schema& schema, const MetricSpec& spec, LabelFilter filter)
    : numeric_(schema.numeric_columns()),
      categorical_(schema.categorical_columns()),
      spec_(spec),
      filter_(filter) {
  spec_.validate();
}

bool DecisionMatcher::labels_qualify(const DecisionPoint& a, const DecisionPoint& b) const {
  return filter_ == LabelFilter::kNone || output_distance(a.label, b.label) > spec_.delta_z;
}

bool DecisionMatcher::categories_equal(std::span<const double> a,
                                       std::span<const double> b) const {
  for (std::size_t c : categorical_) {
    if (a[c] != b[c]) return false;
  }
  return true;
}

double DecisionMatcher::numeric_distance(std::span<const double> a,
                                         std::span<const double> b) const {
  double acc = 0.0;
  for (std::size_t c : numeric_) {
    const double diff = std::abs(a[c] - b[c]);
    if (spec_.norm == Norm::kL2) {
      acc += diff * diff;
    } else {
      acc = std::max(acc, diff);
    }
  }
  return spec_.norm == Norm::kL2 ? std::sqrt(acc) : acc;
}

bool DecisionMatcher::matches(const DecisionPoint& stored, const DecisionPoint& query) const {
  return labels_qualify(stored, query) && categories_equal(stored.features, query.features) &&
         numeric_distance(stored.features, query.features) <= spec_.epsilon_x;
}

}  // namespace iormon
