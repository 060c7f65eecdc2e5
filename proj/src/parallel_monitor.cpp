#include "iormon/parallel_monitor.hpp"

#include <algorithm>
#include <iterator>

#include "iormon/errors.hpp"

namespace iormon {

std::vector<std::vector<std::size_t>> partition_columns(const std::vector<std::size_t>& numeric,
                                                        std::size_t k) {
  if (k == 0 || k > numeric.size()) {
    throw ConfigError("block count must be between 1 and the number of numeric columns (" +
                      std::to_string(numeric.size()) + ")");
  }
  std::vector<std::vector<std::size_t>> blocks(k);
  const std::size_t base = numeric.size() / k;
  const std::size_t extra = numeric.size() % k;
  std::size_t next = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    blocks[b].assign(numeric.begin() + static_cast<std::ptrdiff_t>(next),
                     numeric.begin() + static_cast<std::ptrdiff_t>(next + len));
    next += len;
  }
  return blocks;
}

DecisionPoint project(const DecisionPoint& p, std::span<const std::size_t> cols) {
  DecisionPoint out{.id = p.id, .features = {}, .label = p.label};
  out.features.reserve(cols.size());
  for (std::size_t c : cols) out.features.push_back(p.features.at(c));
  return out;
}

ParallelMonitor::ParallelMonitor(Schema schema, MetricSpec metric, std::size_t blocks,
                                 const SubMonitorFactory& factory, LabelFilter filter)
    : Monitor(std::move(schema), metric),
      matcher_(this->schema(), this->metric(), filter),
      blocks_(partition_columns(this->schema().numeric_columns(), blocks)),
      categorical_(this->schema().categorical_columns()),
      pool_(blocks) {
  if (this->metric().norm != Norm::kLinf) {
    throw ConfigError("block-parallel monitoring requires the linf norm");
  }
  for (const auto& block : blocks_) {
    subs_.push_back(factory(this->schema().project(block), this->metric(), LabelFilter::kNone));
  }
  last_candidates_.resize(blocks_.size());
}

ParallelMonitor::~ParallelMonitor() = default;

std::string ParallelMonitor::name() const {
  return "parallel(" + std::to_string(blocks_.size()) + "x" + subs_.front()->name() + ")";
}

MonitorCounters ParallelMonitor::counters() const {
  MonitorCounters c = counters_;
  for (const auto& sub : subs_) {
    MonitorCounters s = sub->counters();
    s.points_stored = 0;
    s.queries = 0;
    c += s;
  }
  c.points_stored = points_.size();
  return c;
}

const DecisionPoint& ParallelMonitor::stored(PointId id) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), id,
                             [](const DecisionPoint& p, PointId v) { return p.id < v; });
  return *it;
}

std::vector<PointId> ParallelMonitor::do_query(const DecisionPoint& p) {
  ++counters_.queries;
  pool_.run(subs_.size(), [&](std::size_t b) {
    last_candidates_[b] = subs_[b]->query(project(p, blocks_[b]));
  });

  std::vector<PointId> ids = last_candidates_.front();
  std::vector<PointId> scratch;
  for (std::size_t b = 1; b < last_candidates_.size() && !ids.empty(); ++b) {
    scratch.clear();
    std::set_intersection(ids.begin(), ids.end(), last_candidates_[b].begin(),
                          last_candidates_[b].end(), std::back_inserter(scratch));
    ids.swap(scratch);
  }
  if (!categorical_.empty() && !ids.empty()) {
    std::vector<double> key;
    for (std::size_t c : categorical_) key.push_back(p.features[c]);
    auto it = by_category_.find(key);
    scratch.clear();
    if (it != by_category_.end()) {
      std::set_intersection(ids.begin(), ids.end(), it->second.begin(), it->second.end(),
                            std::back_inserter(scratch));
    }
    ids.swap(scratch);
  }

  std::vector<PointId> out;
  for (PointId id : ids) {
    if (matcher_.labels_qualify(stored(id), p)) out.push_back(id);
  }
  counters_.comparisons += ids.size();
  return out;
}

void ParallelMonitor::do_insert(const DecisionPoint& p) {
  pool_.run(subs_.size(), [&](std::size_t b) { subs_[b]->insert(project(p, blocks_[b])); });
  if (!categorical_.empty()) {
    std::vector<double> key;
    for (std::size_t c : categorical_) key.push_back(p.features[c]);
    by_category_[key].push_back(p.id);
  }
  points_.push_back(p);
}

}  // namespace iormon
