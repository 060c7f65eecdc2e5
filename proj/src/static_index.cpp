#include "iormon/static_index.hpp"

#include "iormon/kd_tree.hpp"
#include "iormon/snn_index.hpp"

namespace iormon {

std::unique_ptr<StaticIndex> make_static_index(StaticBackend backend, const Schema& schema,
                                               const MetricSpec& metric, LabelFilter filter) {
  switch (backend) {
    case StaticBackend::kSnn:
      return std::make_unique<SnnIndex>(schema, metric, filter);
    case StaticBackend::kKdTree:
      break;
  }
  return std::make_unique<KdTree>(schema, metric, filter);
}

}  // namespace iormon
