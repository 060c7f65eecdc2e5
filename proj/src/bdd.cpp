#include "iormon/bdd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace iormon {

namespace {

constexpr std::uint32_t kTerminalVar = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> identity_order(std::uint32_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  return order;
}

}  // namespace

std::size_t BddManager::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = k.a * 0x9E3779B97F4A7C15ull;
  h ^= k.b + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
  h ^= h >> 31;
  return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
}

BddManager::BddManager(std::uint32_t num_vars) : BddManager(identity_order(num_vars)) {}

BddManager::BddManager(std::vector<std::uint32_t> order)
    : order_(std::move(order)), level_of_(order_.size(), kTerminalVar) {
  for (std::uint32_t lvl = 0; lvl < order_.size(); ++lvl) {
    const std::uint32_t v = order_[lvl];
    if (v >= order_.size() || level_of_[v] != kTerminalVar) {
      throw std::invalid_argument("variable order must be a permutation");
    }
    level_of_[v] = lvl;
  }
  reset();
}

void BddManager::reset() {
  nodes_.assign(2, Node{kTerminalVar, kFalse, kFalse});
  nodes_[1] = Node{kTerminalVar, kTrue, kTrue};
  unique_.clear();
  cache_.clear();
}

std::uint32_t BddManager::node_level(BddRef f) const {
  const std::uint32_t v = nodes_[f.id].var;
  return v == kTerminalVar ? kTerminalVar : level_of_[v];
}

BddRef BddManager::make(std::uint32_t var, BddRef low, BddRef high) {
  if (low == high) return low;
  const Key key{var, (std::uint64_t{low.id} << 32) | high.id};
  auto [it, inserted] = unique_.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
  if (inserted) nodes_.push_back(Node{var, low, high});
  return BddRef{it->second};
}

void BddManager::remember(const Key& key, BddRef value) {
  if (cache_.size() >= cache_limit_) cache_.clear();
  cache_.emplace(key, value.id);
}

BddRef BddManager::variable(std::uint32_t var) {
  if (var >= num_vars()) throw std::out_of_range("variable index out of range");
  return make(var, kFalse, kTrue);
}

BddRef BddManager::apply(BddOp op, BddRef f, BddRef g) {
  if (op == BddOp::kNot) return negate(f);
  return apply_rec(op, f, g);
}

BddRef BddManager::apply_rec(BddOp op, BddRef f, BddRef g) {
  switch (op) {
    case BddOp::kAnd:
      if (f == kFalse || g == kFalse) return kFalse;
      if (f == kTrue || f == g) return g;
      if (g == kTrue) return f;
      break;
    case BddOp::kOr:
      if (f == kTrue || g == kTrue) return kTrue;
      if (f == kFalse || f == g) return g;
      if (g == kFalse) return f;
      break;
    case BddOp::kXor:
      if (f == g) return kFalse;
      if (f == kFalse) return g;
      if (g == kFalse) return f;
      break;
    case BddOp::kNot:
      return negate_rec(f);
  }
  if (g < f) std::swap(f, g);  // all binary ops here commute

  const Key key{(std::uint64_t{static_cast<std::uint8_t>(op)} << 32) | f.id, g.id};
  if (auto it = cache_.find(key); it != cache_.end()) return BddRef{it->second};

  const std::uint32_t lf = node_level(f);
  const std::uint32_t lg = node_level(g);
  const std::uint32_t top = std::min(lf, lg);
  const Node nf = nodes_[f.id];
  const Node ng = nodes_[g.id];
  const BddRef f0 = lf == top ? nf.low : f;
  const BddRef f1 = lf == top ? nf.high : f;
  const BddRef g0 = lg == top ? ng.low : g;
  const BddRef g1 = lg == top ? ng.high : g;

  const BddRef low = apply_rec(op, f0, g0);
  const BddRef high = apply_rec(op, f1, g1);
  const BddRef result = make(order_[top], low, high);
  remember(key, result);
  return result;
}

BddRef BddManager::negate(BddRef f) { return negate_rec(f); }

BddRef BddManager::negate_rec(BddRef f) {
  if (f == kFalse) return kTrue;
  if (f == kTrue) return kFalse;
  const Key key{(std::uint64_t{static_cast<std::uint8_t>(BddOp::kNot)} << 32) | f.id, 0};
  if (auto it = cache_.find(key); it != cache_.end()) return BddRef{it->second};
  const Node n = nodes_[f.id];
  const BddRef low = negate_rec(n.low);
  const BddRef high = negate_rec(n.high);
  const BddRef result = make(n.var, low, high);
  remember(key, result);
  return result;
}

BddRef BddManager::cube(std::span<const Literal> literals) {
  std::vector<Literal> sorted(literals.begin(), literals.end());
  for (const Literal& l : sorted) {
    if (l.var >= num_vars()) throw std::out_of_range("variable index out of range");
  }
  std::sort(sorted.begin(), sorted.end(), [&](const Literal& a, const Literal& b) {
    return level_of_[a.var] > level_of_[b.var];
  });
  BddRef acc = kTrue;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Literal& l = sorted[i];
    if (i > 0 && sorted[i - 1].var == l.var) {
      if (sorted[i - 1].value != l.value) return kFalse;
      continue;
    }
    acc = l.value ? make(l.var, kFalse, acc) : make(l.var, acc, kFalse);
  }
  return acc;
}

bool BddManager::eval(BddRef f, std::span<const std::uint8_t> assignment) const {
  if (assignment.size() < num_vars()) throw std::invalid_argument("assignment is not total");
  while (!is_terminal(f)) {
    const Node& n = nodes_[f.id];
    f = assignment[n.var] ? n.high : n.low;
  }
  return f == kTrue;
}

void BddManager::for_each_sat(BddRef f, std::span<const std::uint32_t> vars,
                              const std::function<void(std::span<const std::uint8_t>)>& visit) const {
  // Positions of `vars` sorted by level.
  std::vector<std::size_t> by_level(vars.size());
  std::iota(by_level.begin(), by_level.end(), std::size_t{0});
  std::sort(by_level.begin(), by_level.end(), [&](std::size_t a, std::size_t b) {
    return level_of_.at(vars[a]) < level_of_.at(vars[b]);
  });
  std::vector<std::uint8_t> assignment(vars.size(), 0);

  const std::function<void(BddRef, std::size_t)> walk = [&](BddRef node, std::size_t depth) {
    if (node == kFalse) return;
    if (depth == by_level.size()) {
      if (node != kTrue) throw std::invalid_argument("variable list does not cover the support");
      visit(assignment);
      return;
    }
    const std::size_t slot = by_level[depth];
    const std::uint32_t lvl = level_of_[vars[slot]];
    const std::uint32_t node_lvl = node_level(node);
    if (node_lvl < lvl) throw std::invalid_argument("variable list does not cover the support");
    BddRef low = node;
    BddRef high = node;
    if (node_lvl == lvl) {
      low = nodes_[node.id].low;
      high = nodes_[node.id].high;
    }
    assignment[slot] = 0;
    walk(low, depth + 1);
    assignment[slot] = 1;
    walk(high, depth + 1);
    assignment[slot] = 0;
  };
  walk(f, 0);
}

std::vector<std::vector<std::uint8_t>> BddManager::sat_all(
    BddRef f, std::span<const std::uint32_t> vars) const {
  std::vector<std::vector<std::uint8_t>> out;
  for_each_sat(f, vars, [&](std::span<const std::uint8_t> a) { out.emplace_back(a.begin(), a.end()); });
  return out;
}

std::size_t BddManager::size(BddRef f) const {
  std::vector<std::uint32_t> stack{f.id};
  std::vector<bool> seen(nodes_.size(), false);
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = true;
    ++count;
    if (id >= 2) {
      stack.push_back(nodes_[id].low.id);
      stack.push_back(nodes_[id].high.id);
    }
  }
  return count;
}

std::string BddManager::to_dot(BddRef f) const {
  std::ostringstream out;
  out << "digraph bdd {\n";
  out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  std::vector<std::uint32_t> stack{f.id};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (seen[id] || id < 2) continue;
    seen[id] = true;
    const Node& n = nodes_[id];
    out << "  n" << id << " [label=\"x" << n.var << "\"];\n";
    out << "  n" << id << " -> n" << n.low.id << " [style=dashed];\n";
    out << "  n" << id << " -> n" << n.high.id << ";\n";
    stack.push_back(n.low.id);
    stack.push_back(n.high.id);
  }
  out << "}\n";
  return out.str();
}

bool BddManager::check_canonical() const {
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> triples;
  for (std::uint32_t id = 2; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.low == n.high) return false;
    if (!triples.emplace(n.var, n.low.id, n.high.id).second) return false;
    const std::uint32_t lvl = level_of_[n.var];
    if (node_level(n.low) <= lvl || node_level(n.high) <= lvl) return false;
  }
  return true;
}

}  // namespace iormon
