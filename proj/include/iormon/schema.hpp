#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace iormon {

enum class ColumnKind { kNumeric, kCategorical, kIgnored };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Numeric bounds. Infinite bounds mean "unbounded", which every backend
  // except the grid-based one accepts.
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  // Enumerated tokens of a categorical column; a feature stores the index.
  std::vector<std::string> categories;

  bool bounded() const;
};

// Ordered column layout shared by every decision of one session.
//
// Feature vectors are stored as doubles: numeric columns hold the value,
// categorical columns hold the index of the token in `categories`, ignored
// columns hold an unspecified placeholder that no distance ever reads.
class Schema {
 public:
  Schema() = default;
  Schema(std::vector<Column> columns, std::string label_column = "label");

  static Schema all_numeric(std::size_t dim, double lower = 0.0, double upper = 1.0);

  std::size_t dimension() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  const std::string& label_column() const { return label_column_; }

  // Column positions by kind, in schema order.
  const std::vector<std::size_t>& numeric_columns() const { return numeric_; }
  const std::vector<std::size_t>& categorical_columns() const { return categorical_; }

  std::optional<std::size_t> find(const std::string& name) const;

  // Index of `token` in categorical column `col`; throws SchemaError otherwise.
  std::size_t category_index(std::size_t col, const std::string& token) const;

  // A schema containing only `cols` (in the given order), same label column.
  Schema project(const std::vector<std::size_t>& cols) const;

 private:
  std::vector<Column> columns_;
  std::string label_column_;
  std::vector<std::size_t> numeric_;
  std::vector<std::size_t> categorical_;
};

}  // namespace iormon
