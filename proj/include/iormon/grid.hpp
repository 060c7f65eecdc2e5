#pragma once

#include <cstdint>
#include <vector>

#include "iormon/bdd.hpp"
#include "iormon/decision.hpp"
#include "iormon/schema.hpp"

namespace iormon {

// Per-column cell index (numeric) or token index (categorical).
using LabelVector = std::vector<std::uint32_t>;

struct LabelVectorHash {
  std::size_t operator()(const LabelVector& v) const noexcept;
};

// How the bits of the per-column encodings are laid out in the BDD order.
enum class GridOrder {
  // All bits of column 0 (most significant first), then column 1, ...
  kColumnMajor,
  // Bit j of every column before bit j+1 of any column, MSB aligned.
  kInterleaved,
};

struct GridColumn {
  std::size_t column = 0;  // schema position
  ColumnKind kind = ColumnKind::kNumeric;
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
  std::uint32_t cells = 0;  // numeric: ceil((upper - lower) / width); categorical: token count
  std::uint32_t bits = 0;   // ceil(log2(cells))
  std::vector<std::uint32_t> vars;  // BDD variable per bit, most significant first
};

// Epsilon-width discretisation of the non-ignored columns of a schema.
//
// Numeric cell k is the half-open interval [lower + k*eps, lower + (k+1)*eps).
class GridSpec {
 public:
  GridSpec(const Schema& schema, double epsilon, GridOrder order = GridOrder::kColumnMajor);

  const std::vector<GridColumn>& columns() const { return columns_; }
  std::uint32_t total_bits() const { return total_bits_; }
  double epsilon() const { return epsilon_; }
  // Variables 0 .. total_bits-1.
  const std::vector<std::uint32_t>& variables() const { return variables_; }

  // Cell of a single numeric value; RangeError outside [lower, upper) unless
  // `clamp`, which maps it to the nearest boundary cell.
  std::uint32_t cell_of(const GridColumn& col, double value, bool clamp) const;
  LabelVector discretize(const DecisionPoint& p, bool clamp = false) const;

  std::vector<Literal> encode(const LabelVector& v) const;
  // Inverse of encode for a full assignment aligned with variables().
  LabelVector decode(std::span<const std::uint8_t> bits) const;

 private:
  std::vector<GridColumn> columns_;
  std::vector<std::uint32_t> variables_;
  std::uint32_t total_bits_ = 0;
  double epsilon_;
};

// Encodings of the label vectors w with |w_i - v_i| <= 1 on numeric columns
// and w_i = v_i on categorical ones, restricted to valid cells.
BddRef neighbor_predicate(const GridSpec& grid, const LabelVector& v, BddManager& mgr);

}  // namespace iormon
