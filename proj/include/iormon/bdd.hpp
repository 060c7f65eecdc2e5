#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace iormon {

// Handle to a node of one BddManager.
struct BddRef {
  std::uint32_t id = 0;

  friend auto operator<=>(const BddRef&, const BddRef&) = default;
};

enum class BddOp : std::uint8_t { kAnd, kOr, kXor, kNot };

struct Literal {
  std::uint32_t var = 0;
  bool value = false;
};

// Reduced ordered binary decision diagrams over a fixed variable order.
//
// Nodes are hash-consed, so two refs of one manager denote the same function
// iff their ids are equal. Terminals are id 0 (false) and id 1 (true). There
// is no garbage collection: nodes live until reset().
class BddManager {
 public:
  struct Node {
    std::uint32_t var = 0;
    BddRef low;
    BddRef high;
  };

  // Identity order: variable i sits at level i.
  explicit BddManager(std::uint32_t num_vars);
  // order[level] = variable tested at that level.
  explicit BddManager(std::vector<std::uint32_t> order);

  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(level_of_.size()); }
  std::uint32_t level(std::uint32_t var) const { return level_of_.at(var); }
  const std::vector<std::uint32_t>& order() const { return order_; }

  static constexpr BddRef kFalse{0};
  static constexpr BddRef kTrue{1};

  BddRef constant(bool value) const { return value ? kTrue : kFalse; }
  BddRef variable(std::uint32_t var);
  BddRef apply(BddOp op, BddRef f, BddRef g);
  BddRef negate(BddRef f);
  BddRef conjoin(BddRef f, BddRef g) { return apply(BddOp::kAnd, f, g); }
  BddRef disjoin(BddRef f, BddRef g) { return apply(BddOp::kOr, f, g); }
  // Conjunction of the given literals; the empty cube is true.
  BddRef cube(std::span<const Literal> literals);

  // `assignment[var]` holds the value of every variable.
  bool eval(BddRef f, std::span<const std::uint8_t> assignment) const;

  // Calls `visit` once per satisfying assignment over `vars`, in lexicographic
  // order of the variable order (false before true). The assignment passed
  // to `visit` is aligned with `vars`; variables f does not test are
  // expanded. `vars` must cover the support of f.
  void for_each_sat(BddRef f, std::span<const std::uint32_t> vars,
                    const std::function<void(std::span<const std::uint8_t>)>& visit) const;
  std::vector<std::vector<std::uint8_t>> sat_all(BddRef f,
                                                 std::span<const std::uint32_t> vars) const;

  bool is_terminal(BddRef f) const { return f.id < 2; }
  const Node& node(BddRef f) const { return nodes_.at(f.id); }
  // Nodes reachable from f, terminals included.
  std::size_t size(BddRef f) const;
  // Allocated nodes, terminals included.
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t cache_entries() const { return cache_.size(); }

  // Graphviz rendering of the nodes reachable from f.
  std::string to_dot(BddRef f) const;

  // Reduction, uniqueness and ordering over the whole node table.
  bool check_canonical() const;

  // Drops all nodes except the terminals, and all memoized results.
  void reset();

  // Upper bound on memoized apply results; the table is flushed when full.
  void set_cache_limit(std::size_t entries) { cache_limit_ = entries; }

 private:
  struct Key {
    std::uint64_t a;
    std::uint64_t b;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::uint32_t node_level(BddRef f) const;
  BddRef make(std::uint32_t var, BddRef low, BddRef high);
  BddRef apply_rec(BddOp op, BddRef f, BddRef g);
  BddRef negate_rec(BddRef f);
  void remember(const Key& key, BddRef value);

  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> level_of_;
  std::vector<Node> nodes_;
  std::unordered_map<Key, std::uint32_t, KeyHash> unique_;
  std::unordered_map<Key, std::uint32_t, KeyHash> cache_;
  std::size_t cache_limit_ = std::size_t{1} << 22;
};

}  // namespace iormon
