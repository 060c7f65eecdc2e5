#include "iormon/schema.hpp"

#include <algorithm>
#include <cmath>

#include "iormon/errors.hpp"

namespace iormon {

bool Column::bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

Schema::Schema(std::vector<Column> columns, std::string label_column)
    : columns_(std::move(columns)), label_column_(std::move(label_column)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (columns_[j].name == c.name) throw SchemaError("duplicate column name '" + c.name + "'");
    }
    switch (c.kind) {
      case ColumnKind::kNumeric:
        if (std::isnan(c.lower) || std::isnan(c.upper) || !(c.lower < c.upper)) {
          throw SchemaError("numeric column '" + c.name + "' needs lower < upper");
        }
        numeric_.push_back(i);
        break;
      case ColumnKind::kCategorical:
        if (c.categories.empty()) {
          throw SchemaError("categorical column '" + c.name + "' declares no values");
        }
        categorical_.push_back(i);
        break;
      case ColumnKind::kIgnored:
        break;
    }
  }
  if (numeric_.empty() && categorical_.empty()) {
    throw SchemaError("schema needs at least one non-ignored column");
  }
  if (find(label_column_)) {
    throw SchemaError("label column '" + label_column_ + "' clashes with a feature column");
  }
}

Schema Schema::all_numeric(std::size_t dim, double lower, double upper) {
  std::vector<Column> cols;
  cols.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    cols.push_back(Column{.name = "x" + std::to_string(i),
                          .kind = ColumnKind::kNumeric,
                          .lower = lower,
                          .upper = upper});
  }
  return Schema(std::move(cols));
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
  auto it = std::find_if(columns_.begin(), columns_.end(),
                         [&](const Column& c) { return c.name == name; });
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::size_t Schema::category_index(std::size_t col, const std::string& token) const {
  const Column& c = column(col);
  auto it = std::find(c.categories.begin(), c.categories.end(), token);
  if (it == c.categories.end()) {
    throw SchemaError("unknown token '" + token + "' in categorical column '" + c.name + "'");
  }
  return static_cast<std::size_t>(it - c.categories.begin());
}

Schema Schema::project(const std::vector<std::size_t>& cols) const {
  std::vector<Column> out;
  out.reserve(cols.size());
  for (std::size_t c : cols) out.push_back(column(c));
  return Schema(std::move(out), label_column_);
}

}  // namespace iormon
