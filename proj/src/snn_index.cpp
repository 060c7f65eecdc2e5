#include "iormon/snn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iormon/errors.hpp"

namespace iormon {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kTolerance = 1e-8;

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

std::vector<double> principal_direction(std::span<const double> rows, std::size_t dim) {
  if (dim == 0) return {};
  if (rows.empty() || rows.size() % dim != 0) {
    throw MonitorError("principal_direction needs a non-empty n x d matrix");
  }
  const std::size_t n = rows.size() / dim;

  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += rows[i * dim + j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> cov(dim * dim, 0.0);
  std::vector<double> centred(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) centred[j] = rows[i * dim + j] - mean[j];
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a; b < dim; ++b) cov[a * dim + b] += centred[a] * centred[b];
    }
  }
  double trace = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < a; ++b) cov[a * dim + b] = cov[b * dim + a];
    trace += cov[a * dim + a];
  }

  std::vector<double> basis0(dim, 0.0);
  basis0[0] = 1.0;
  if (!(trace > 0.0)) return basis0;

  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out(dim, 0.0);
    for (std::size_t a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < dim; ++b) acc += cov[a * dim + b] * v[b];
      out[a] = acc;
    }
    return out;
  };

  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  // The all-ones start can be orthogonal to the data (e.g. points along
  // [1, -1]); fall back to the standard basis in that case.
  const double degenerate = trace * 1e-12;
  if (norm2(apply(v)) <= degenerate) {
    for (std::size_t k = 0; k < dim; ++k) {
      std::vector<double> e(dim, 0.0);
      e[k] = 1.0;
      if (norm2(apply(e)) > degenerate) {
        v = e;
        break;
      }
    }
  }

  for (int it = 0; it < kMaxIterations; ++it) {
    std::vector<double> next = apply(v);
    const double len = norm2(next);
    if (!(len > 0.0)) break;
    double moved = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      next[j] /= len;
      moved += (next[j] - v[j]) * (next[j] - v[j]);
    }
    v = std::move(next);
    if (std::sqrt(moved) < kTolerance) break;
  }

  for (double x : v) {
    if (x == 0.0) continue;
    if (x < 0.0) {
      for (double& y : v) y = -y;
    }
    break;
  }
  return v;
}

SnnIndex::SnnIndex(const Schema& schema, const MetricSpec& metric, LabelFilter filter)
    : matcher_(schema, metric, filter), numeric_(schema.numeric_columns()) {
  if (metric.norm != Norm::kL2) {
    throw ConfigError("the snn backend supports only the l2 norm");
  }
}

double SnnIndex::key(std::span<const double> features) const {
  double k = 0.0;
  for (std::size_t d = 0; d < numeric_.size(); ++d) {
    k += (features[numeric_[d]] - mean_[d]) * direction_[d];
  }
  return k;
}

void SnnIndex::build(std::span<const DecisionPoint> points) {
  points_ = points;
  entries_.clear();
  max_abs_key_ = 0.0;
  const std::size_t dims = numeric_.size();
  mean_.assign(dims, 0.0);
  direction_.assign(dims, 0.0);
  if (points.empty()) return;

  if (dims > 0) {
    std::vector<double> rows;
    rows.reserve(points.size() * dims);
    for (const DecisionPoint& p : points) {
      for (std::size_t c : numeric_) rows.push_back(p.features[c]);
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t d = 0; d < dims; ++d) mean_[d] += rows[i * dims + d];
    }
    for (double& m : mean_) m /= static_cast<double>(points.size());
    direction_ = principal_direction(rows, dims);
  }

  entries_.reserve(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    const double k = key(points[i].features);
    entries_.push_back(Entry{.key = k, .id = points[i].id, .pos = i});
    max_abs_key_ = std::max(max_abs_key_, std::abs(k));
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.key < b.key || (a.key == b.key && a.id < b.id);
  });
}

std::pair<double, double> SnnIndex::window(double query_key) const {
  const double eps = matcher_.spec().epsilon_x;
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(query_key) + eps + max_abs_key_);
  return {query_key - eps - slack, query_key + eps + slack};
}

std::vector<PointId> SnnIndex::query(const DecisionPoint& q, IndexQueryStats& stats) const {
  std::vector<PointId> out;
  if (entries_.empty()) return out;
  const auto [lo, hi] = window(key(q.features));
  auto it = std::lower_bound(entries_.begin(), entries_.end(), lo,
                             [](const Entry& e, double v) { return e.key < v; });
  ++stats.nodes_visited;
  for (; it != entries_.end() && it->key <= hi; ++it) {
    ++stats.comparisons;
    const DecisionPoint& p = points_[it->pos];
    if (matcher_.matches(p, q)) out.push_back(p.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace iormon
