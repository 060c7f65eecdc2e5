#pragma once

#include <vector>

#include "iormon/static_index.hpp"

namespace iormon {

// Unit vector of maximal projected variance for the mean-centred rows of a
// row-major n x d matrix, by power iteration on the covariance matrix.
//
// Starts from the normalised all-ones vector, stops when successive iterates
// move less than 1e-8 or after 1000 iterations, and orients the result so its
// first nonzero component is positive. A zero covariance yields e_0.
std::vector<double> principal_direction(std::span<const double> rows, std::size_t dim);

// Sorting-based index for L2 radius search.
//
// Each decision gets the key <x - mean, v> with v the first principal
// direction of the indexed numeric columns. Since |v| = 1, keys of two points
// differ by at most their L2 distance, so a query only has to examine the
// entries whose keys fall within epsilon of its own key.
class SnnIndex final : public StaticIndex {
 public:
  struct Entry {
    double key = 0.0;
    PointId id = 0;
    std::uint32_t pos = 0;
  };

  SnnIndex(const Schema& schema, const MetricSpec& metric,
           LabelFilter filter = LabelFilter::kDifferingLabels);

  void build(std::span<const DecisionPoint> points) override;
  std::vector<PointId> query(const DecisionPoint& q, IndexQueryStats& stats) const override;

  std::size_t size() const override { return entries_.size(); }
  std::size_t node_count() const override { return entries_.size(); }
  std::string name() const override { return "snn"; }

  double key(std::span<const double> features) const;
  // Key interval examined for a query key, slack included.
  std::pair<double, double> window(double query_key) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& direction() const { return direction_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  DecisionMatcher matcher_;
  std::vector<std::size_t> numeric_;
  std::span<const DecisionPoint> points_;
  std::vector<double> mean_;
  std::vector<double> direction_;
  std::vector<Entry> entries_;
  double max_abs_key_ = 0.0;
};

}  // namespace iormon
