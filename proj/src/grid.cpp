#include "iormon/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iormon/errors.hpp"

namespace iormon {

std::size_t LabelVectorHash::operator()(const LabelVector& v) const noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::uint32_t x : v) {
    h ^= x;
    h *= 0x100000001B3ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

namespace {

std::uint32_t bits_for(std::uint64_t cells) {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < cells) ++bits;
  return bits;
}

}  // namespace

GridSpec::GridSpec(const Schema& schema, double epsilon, GridOrder order) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("grid cell width must be positive");
  }
  for (std::size_t i = 0; i < schema.dimension(); ++i) {
    const Column& c = schema.column(i);
    GridColumn g{.column = i, .kind = c.kind};
    if (c.kind == ColumnKind::kIgnored) continue;
    if (c.kind == ColumnKind::kNumeric) {
      if (!c.bounded()) {
        throw ConfigError("the bdd backend needs finite bounds for numeric column '" + c.name + "'");
      }
      const double cells = std::ceil((c.upper - c.lower) / epsilon);
      if (!(cells <= double{1u << 31})) {
        throw ConfigError("column '" + c.name + "' would need more than 2^31 cells");
      }
      g.lower = c.lower;
      g.upper = c.upper;
      g.width = epsilon;
      g.cells = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(cells));
    } else {
      g.cells = static_cast<std::uint32_t>(c.categories.size());
    }
    g.bits = bits_for(g.cells);
    g.vars.resize(g.bits);
    columns_.push_back(std::move(g));
  }

  std::uint32_t next = 0;
  if (order == GridOrder::kColumnMajor) {
    for (GridColumn& g : columns_) {
      for (std::uint32_t b = 0; b < g.bits; ++b) g.vars[b] = next++;
    }
  } else {
    std::uint32_t widest = 0;
    for (const GridColumn& g : columns_) widest = std::max(widest, g.bits);
    for (std::uint32_t j = 0; j < widest; ++j) {
      for (GridColumn& g : columns_) {
        if (j < g.bits) g.vars[j] = next++;
      }
    }
  }
  total_bits_ = next;
  variables_.resize(next);
  for (std::uint32_t v = 0; v < next; ++v) variables_[v] = v;
}

std::uint32_t GridSpec::cell_of(const GridColumn& col, double value, bool clamp) const {
  if (std::isnan(value)) throw RangeError("NaN cannot be discretised");
  if (value < col.lower || value >= col.upper) {
    if (!clamp) {
      std::ostringstream msg;
      msg << "value " << value << " outside [" << col.lower << ", " << col.upper << ")";
      throw RangeError(msg.str());
    }
    return value < col.lower ? 0 : col.cells - 1;
  }
  // Boundaries are the floating-point values lower + k * width; correct the
  // quotient so the cell is exact with respect to them.
  auto k = static_cast<std::int64_t>(std::floor((value - col.lower) / col.width));
  const auto last = static_cast<std::int64_t>(col.cells) - 1;
  k = std::clamp<std::int64_t>(k, 0, last);
  while (k > 0 && value < col.lower + static_cast<double>(k) * col.width) --k;
  while (k < last && value >= col.lower + static_cast<double>(k + 1) * col.width) ++k;
  return static_cast<std::uint32_t>(k);
}

LabelVector GridSpec::discretize(const DecisionPoint& p, bool clamp) const {
  LabelVector v(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const GridColumn& g = columns_[i];
    const double x = p.features.at(g.column);
    if (g.kind == ColumnKind::kNumeric) {
      v[i] = cell_of(g, x, clamp);
    } else {
      if (!(x >= 0.0 && x < g.cells) || x != std::floor(x)) {
        throw RangeError("categorical value index out of range");
      }
      v[i] = static_cast<std::uint32_t>(x);
    }
  }
  return v;
}

std::vector<Literal> GridSpec::encode(const LabelVector& v) const {
  std::vector<Literal> lits;
  lits.reserve(total_bits_);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const GridColumn& g = columns_[i];
    for (std::uint32_t b = 0; b < g.bits; ++b) {
      lits.push_back(Literal{g.vars[b], ((v[i] >> (g.bits - 1 - b)) & 1u) != 0});
    }
  }
  return lits;
}

LabelVector GridSpec::decode(std::span<const std::uint8_t> bits) const {
  LabelVector v(columns_.size(), 0);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const GridColumn& g = columns_[i];
    std::uint32_t x = 0;
    for (std::uint32_t b = 0; b < g.bits; ++b) x = (x << 1) | (bits[g.vars[b]] ? 1u : 0u);
    v[i] = x;
  }
  return v;
}

BddRef neighbor_predicate(const GridSpec& grid, const LabelVector& v, BddManager& mgr) {
  BddRef acc = BddManager::kTrue;
  std::vector<Literal> lits;
  // Conjoin from the last column so each step adds a small factor.
  for (std::size_t i = grid.columns().size(); i-- > 0;) {
    const GridColumn& g = grid.columns()[i];
    if (g.bits == 0) continue;
    std::uint32_t first = v[i];
    std::uint32_t last = v[i];
    if (g.kind == ColumnKind::kNumeric) {
      first = v[i] == 0 ? 0 : v[i] - 1;
      last = std::min(v[i] + 1, g.cells - 1);
    }
    BddRef column = BddManager::kFalse;
    for (std::uint32_t w = first; w <= last; ++w) {
      lits.clear();
      for (std::uint32_t b = 0; b < g.bits; ++b) {
        lits.push_back(Literal{g.vars[b], ((w >> (g.bits - 1 - b)) & 1u) != 0});
      }
      column = mgr.disjoin(column, mgr.cube(lits));
    }
    acc = mgr.conjoin(column, acc);
  }
  return acc;
}

}  // namespace iormon
