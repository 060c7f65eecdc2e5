#include "iormon/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "iormon/errors.hpp"
#include "iormon/periodic_monitor.hpp"

namespace iormon {

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw GeneratorError("Rng::below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

std::vector<std::string> label_tokens(std::size_t count) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < count; ++i) tokens.push_back(std::to_string(i));
  return tokens;
}

std::vector<DecisionPoint> gen_uniform(std::size_t n, std::size_t d, std::size_t label_count,
                                       std::uint64_t seed) {
  if (label_count == 0) throw GeneratorError("need at least one label");
  Rng rng(seed);
  const std::vector<std::string> labels = label_tokens(label_count);
  std::vector<DecisionPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = i;
    out[i].features.resize(d);
    for (double& x : out[i].features) x = rng.uniform();
    out[i].label = labels[rng.below(label_count)];
  }
  return out;
}

namespace {

// Largest double below `upper`, so sampled values stay in the half-open range.
double below_upper(double upper) { return std::nextafter(upper, -kInfinity); }

void resample_features(DecisionPoint& p, const Schema& schema, Rng& rng) {
  for (std::size_t c = 0; c < schema.dimension(); ++c) {
    const Column& col = schema.column(c);
    if (col.kind == ColumnKind::kNumeric) {
      p.features[c] = std::min(rng.uniform(col.lower, col.upper), below_upper(col.upper));
    } else if (col.kind == ColumnKind::kCategorical) {
      p.features[c] = static_cast<double>(rng.below(col.categories.size()));
    }
  }
}

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void spend() {
    if (++used_ > limit_) {
      throw GeneratorError("could not keep the stream violation-free within " +
                           std::to_string(limit_) + " resample attempts");
    }
  }
  std::size_t used() const { return used_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

}  // namespace

PlantedStream plant_violations(std::vector<DecisionPoint> stream, const Schema& schema, Norm norm,
                               std::size_t count, double epsilon, std::uint64_t seed) {
  if (count > stream.size()) {
    throw GeneratorError("cannot plant " + std::to_string(count) + " pairs into " +
                         std::to_string(stream.size()) + " decisions");
  }
  for (std::size_t c : schema.numeric_columns()) {
    if (!schema.column(c).bounded()) {
      throw GeneratorError("planting needs bounded numeric columns");
    }
  }
  Rng rng(seed);
  Budget budget(100 * std::max<std::size_t>(count, 1));

  // L-infinity closeness with differing labels. An L2 violation is also one
  // under L-infinity, so streams clean here are clean under both norms.
  const MetricSpec linf{.norm = Norm::kLinf, .epsilon_x = epsilon};
  const MetricSpec target{.norm = norm, .epsilon_x = epsilon};
  const DecisionMatcher conflict(schema, linf);
  const DecisionMatcher violation(schema, target);

  PeriodicMonitor clean(schema, linf, StaticBackend::kKdTree);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    DecisionPoint& p = stream[i];
    p.id = i;
    check_conforms(schema, p);
    while (!clean.query(p).empty()) {
      budget.spend();
      resample_features(p, schema, rng);
    }
    clean.insert(p);
  }

  std::set<std::string> label_set;
  for (const DecisionPoint& p : stream) label_set.insert(p.label);
  const std::vector<std::string> labels(label_set.begin(), label_set.end());
  if (count > 0 && labels.size() < 2) {
    throw GeneratorError("planting a violation needs at least two distinct labels");
  }

  const auto& numeric = schema.numeric_columns();
  const double reach =
      norm == Norm::kLinf || numeric.empty()
          ? epsilon / 2.0
          : epsilon / (2.0 * std::sqrt(static_cast<double>(numeric.size())));

  // Pick distinct originals.
  std::vector<std::size_t> originals(stream.size());
  for (std::size_t i = 0; i < originals.size(); ++i) originals[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(originals[i], originals[i + rng.below(originals.size() - i)]);
  }
  originals.resize(count);

  struct Copy {
    std::size_t original;
    std::size_t after;  // copy goes after this many base decisions
    DecisionPoint point;
  };
  std::vector<Copy> copies;
  std::vector<DecisionPoint> accepted;  // copies so far, for mutual checks
  for (std::size_t o : originals) {
    const DecisionPoint& orig = stream[o];
    std::string label = orig.label;
    for (;;) {
      label = labels[rng.below(labels.size())];
      if (label != orig.label) break;
    }
    for (;;) {
      DecisionPoint c{.id = 0, .features = orig.features, .label = label};
      for (std::size_t col : numeric) {
        const Column& meta = schema.column(col);
        c.features[col] = std::clamp(orig.features[col] + rng.uniform(-reach, reach), meta.lower,
                                     below_upper(meta.upper));
      }
      bool isolated = violation.matches(orig, c);
      for (std::size_t j = 0; isolated && j < stream.size(); ++j) {
        if (j != o && conflict.matches(stream[j], c)) isolated = false;
      }
      for (std::size_t j = 0; isolated && j < accepted.size(); ++j) {
        if (conflict.matches(accepted[j], c)) isolated = false;
      }
      if (isolated) {
        accepted.push_back(c);
        const std::size_t after = o + 1 + rng.below(stream.size() - o);
        copies.push_back(Copy{o, after, std::move(c)});
        break;
      }
      budget.spend();
    }
  }

  std::stable_sort(copies.begin(), copies.end(),
                   [](const Copy& a, const Copy& b) { return a.after < b.after; });
  PlantedStream out;
  std::vector<PointId> new_id(stream.size());
  std::size_t next_copy = 0;
  for (std::size_t i = 0; i <= stream.size(); ++i) {
    while (next_copy < copies.size() && copies[next_copy].after == i) {
      Copy& c = copies[next_copy++];
      c.point.id = out.points.size();
      out.truth.push_back(PlantedPair{new_id[c.original], c.point.id});
      out.points.push_back(std::move(c.point));
    }
    if (i == stream.size()) break;
    new_id[i] = out.points.size();
    stream[i].id = out.points.size();
    out.points.push_back(std::move(stream[i]));
  }
  out.resamples = budget.used();
  return out;
}

}  // namespace iormon
