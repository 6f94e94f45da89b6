#pragma once

// Formula IR: immutable rooted trees of sum/product gates over variable and
// constant-1 leaves, with field scalars on every edge.
//
// Nodes are shared_ptr<const Node>. A node may be referenced from several
// parents (passes reuse subresults), but every measure here has tree
// semantics: a shared subtree counts once per occurrence. Metrics are
// computed at construction, so reading them is O(1).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/field.hpp"

namespace logdepth {

using VarId = std::uint64_t;

/// Variable identifier layout.
///  - plain variables x<n>: n < 2^60
///  - pair variables x_<a>_<b>: bit 60 set, a and b below 2^30
///  - fresh variables (internal to passes, never serialized): bit 62 set
namespace var {

inline constexpr VarId kPairTag = VarId{1} << 60;
inline constexpr VarId kFreshTag = VarId{1} << 62;
inline constexpr VarId kPairLimit = VarId{1} << 30;

inline constexpr bool is_plain(VarId v) { return v < kPairTag; }
inline constexpr bool is_pair(VarId v) { return (v & kPairTag) && !(v & kFreshTag); }
inline constexpr bool is_fresh(VarId v) { return (v & kFreshTag) != 0; }

inline VarId pair(std::uint64_t a, std::uint64_t b) {
  if (a >= kPairLimit || b >= kPairLimit)
    throw std::out_of_range("pair variable index exceeds 2^30");
  return kPairTag | (a << 30) | b;
}
inline constexpr std::uint64_t pair_first(VarId v) { return (v >> 30) & (kPairLimit - 1); }
inline constexpr std::uint64_t pair_second(VarId v) { return v & (kPairLimit - 1); }
inline constexpr VarId fresh(std::uint64_t i) { return kFreshTag | i; }

inline std::string name(VarId v) {
  if (is_fresh(v)) return "y" + std::to_string(v & ~kFreshTag);
  if (is_pair(v)) return "x_" + std::to_string(pair_first(v)) + "_" + std::to_string(pair_second(v));
  return "x" + std::to_string(v);
}

}  // namespace var

enum class GateKind : std::uint8_t { Var, One, Sum, Prod };
enum class Mode : std::uint8_t { Commutative, NonCommutative };

inline const char* to_string(Mode m) {
  return m == Mode::Commutative ? "commutative" : "noncommutative";
}

namespace detail {
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                       : static_cast<std::uint64_t>(p);
}
}  // namespace detail

/// Structural measures of the subtree below a gate.
struct GateMetrics {
  std::uint64_t size = 1;        // leaf count (saturating)
  std::uint32_t depth = 0;       // gates on the longest leaf-to-root path
  std::uint32_t sum_depth = 0;
  std::uint32_t product_depth = 0;
  std::uint64_t syn_degree = 0;  // saturating
  std::uint32_t max_fanin = 0;   // over gates in the subtree; 0 for a leaf
  std::uint32_t min_fanin = std::numeric_limits<std::uint32_t>::max();

  bool operator==(const GateMetrics&) const = default;
};

template <FieldDescriptor K>
class Node;

template <FieldDescriptor K>
using NodePtr = std::shared_ptr<const Node<K>>;

template <FieldDescriptor K>
struct Edge {
  typename K::Scalar weight;
  NodePtr<K> child;
};

template <FieldDescriptor K>
class Node {
  struct Key {};

 public:
  using Scalar = typename K::Scalar;

  static NodePtr<K> var(VarId id) { return std::make_shared<const Node>(Key{}, GateKind::Var, id, std::vector<Edge<K>>{}); }
  static NodePtr<K> one() { return std::make_shared<const Node>(Key{}, GateKind::One, 0, std::vector<Edge<K>>{}); }
  static NodePtr<K> sum(std::vector<Edge<K>> edges) {
    return std::make_shared<const Node>(Key{}, GateKind::Sum, 0, std::move(edges));
  }
  static NodePtr<K> prod(std::vector<Edge<K>> edges) {
    return std::make_shared<const Node>(Key{}, GateKind::Prod, 0, std::move(edges));
  }
  /// Same kind as `g`, new edges.
  static NodePtr<K> gate(GateKind kind, std::vector<Edge<K>> edges) {
    return kind == GateKind::Sum ? sum(std::move(edges)) : prod(std::move(edges));
  }

  Node(Key, GateKind kind, VarId id, std::vector<Edge<K>> edges)
      : kind_(kind), var_(id), edges_(std::move(edges)) {
    switch (kind_) {
      case GateKind::Var:
        m_.syn_degree = 1;
        break;
      case GateKind::One:
        m_.syn_degree = 0;
        break;
      case GateKind::Sum:
      case GateKind::Prod:
        init_gate();
        break;
    }
  }

  GateKind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == GateKind::Var || kind_ == GateKind::One; }
  bool is_gate() const { return !is_leaf(); }
  bool is_var() const { return kind_ == GateKind::Var; }
  bool is_one() const { return kind_ == GateKind::One; }
  bool is_sum() const { return kind_ == GateKind::Sum; }
  bool is_prod() const { return kind_ == GateKind::Prod; }
  VarId var_id() const { return var_; }
  const std::vector<Edge<K>>& edges() const { return edges_; }
  std::size_t fanin() const { return edges_.size(); }
  const GateMetrics& metrics() const { return m_; }

 private:
  void init_gate() {
    if (edges_.empty()) throw WellFormednessError("gate with no children");
    m_.size = 0;
    m_.syn_degree = 0;
    std::uint32_t depth = 0, sd = 0, pd = 0;
    m_.max_fanin = static_cast<std::uint32_t>(edges_.size());
    m_.min_fanin = static_cast<std::uint32_t>(edges_.size());
    for (const auto& e : edges_) {
      if (!e.child) throw WellFormednessError("null child");
      if (e.weight == Scalar(0)) throw WellFormednessError("zero edge weight");
      const auto& c = e.child->metrics();
      if (kind_ == GateKind::Prod && e.child->is_one())
        throw WellFormednessError("constant leaf under a product gate");
      m_.size = detail::sat_add(m_.size, c.size);
      depth = std::max(depth, c.depth);
      sd = std::max(sd, c.sum_depth);
      pd = std::max(pd, c.product_depth);
      m_.max_fanin = std::max(m_.max_fanin, c.max_fanin);
      m_.min_fanin = std::min(m_.min_fanin, c.min_fanin);
      if (kind_ == GateKind::Prod)
        m_.syn_degree = detail::sat_add(m_.syn_degree, c.syn_degree);
      else
        m_.syn_degree = std::max(m_.syn_degree, c.syn_degree);
    }
    m_.depth = depth + 1;
    m_.sum_depth = sd + (kind_ == GateKind::Sum ? 1 : 0);
    m_.product_depth = pd + (kind_ == GateKind::Prod ? 1 : 0);
  }

  GateKind kind_;
  VarId var_;
  std::vector<Edge<K>> edges_;
  GateMetrics m_;
};

template <FieldDescriptor K>
struct Formula {
  K field;
  Mode mode = Mode::Commutative;
  NodePtr<K> root;

  const GateMetrics& metrics() const { return root->metrics(); }
  bool commutative() const { return mode == Mode::Commutative; }
  Formula with_root(NodePtr<K> r) const { return Formula{field, mode, std::move(r)}; }
};

/// Path from the root: child index per level.
using GatePath = std::vector<std::uint32_t>;

template <FieldDescriptor K>
NodePtr<K> node_at(const NodePtr<K>& root, const GatePath& path) {
  NodePtr<K> n = root;
  for (auto i : path) {
    if (i >= n->fanin()) throw std::out_of_range("gate path leaves the tree");
    n = n->edges()[i].child;
  }
  return n;
}

/// Visits each node once (shared nodes are not revisited).
template <FieldDescriptor K, class Fn>
void for_each_unique(const NodePtr<K>& root, Fn&& fn) {
  std::unordered_set<const Node<K>*> seen;
  std::vector<const Node<K>*> stack{root.get()};
  while (!stack.empty()) {
    const Node<K>* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    fn(*n);
    for (const auto& e : n->edges()) stack.push_back(e.child.get());
  }
}

/// Preorder walk over every occurrence (tree semantics), with its path.
template <FieldDescriptor K, class Fn>
void for_each_occurrence(const NodePtr<K>& root, Fn&& fn) {
  GatePath path;
  std::function<void(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) {
    fn(path, n);
    for (std::uint32_t i = 0; i < n->fanin(); ++i) {
      path.push_back(i);
      rec(n->edges()[i].child);
      path.pop_back();
    }
  };
  rec(root);
}

struct GateRecord {
  GatePath path;
  GateKind kind;
  GateMetrics metrics;
};

/// Per-gate metrics table, preorder (leaves included).
template <FieldDescriptor K>
std::vector<GateRecord> gate_table(const Formula<K>& f) {
  std::vector<GateRecord> out;
  for_each_occurrence<K>(f.root, [&](const GatePath& p, const NodePtr<K>& n) {
    out.push_back(GateRecord{p, n->kind(), n->metrics()});
  });
  return out;
}

template <FieldDescriptor K>
bool structurally_equal(const K& field, const NodePtr<K>& a, const NodePtr<K>& b) {
  if (a == b) return true;
  if (a->kind() != b->kind() || a->fanin() != b->fanin()) return false;
  if (a->is_var()) return a->var_id() == b->var_id();
  if (a->is_one()) return true;
  if (!(a->metrics() == b->metrics())) return false;
  for (std::size_t i = 0; i < a->fanin(); ++i) {
    const auto& ea = a->edges()[i];
    const auto& eb = b->edges()[i];
    if (!field.equal(ea.weight, eb.weight)) return false;
    if (!structurally_equal(field, ea.child, eb.child)) return false;
  }
  return true;
}

template <FieldDescriptor K>
bool structurally_equal(const Formula<K>& a, const Formula<K>& b) {
  return a.field == b.field && a.mode == b.mode && structurally_equal(a.field, a.root, b.root);
}

// ---------------------------------------------------------------------------
// Structural predicates.

/// Every sum gate's children share one syntactic degree.
template <FieldDescriptor K>
bool is_homogeneous(const Formula<K>& f) {
  bool ok = true;
  for_each_unique<K>(f.root, [&](const Node<K>& n) {
    if (!ok || !n.is_sum()) return;
    auto d = n.edges().front().child->metrics().syn_degree;
    for (const auto& e : n.edges())
      if (e.child->metrics().syn_degree != d) ok = false;
  });
  return ok;
}

/// Every product gate has at most one non-leaf child.
template <FieldDescriptor K>
bool is_skew(const Formula<K>& f) {
  bool ok = true;
  for_each_unique<K>(f.root, [&](const Node<K>& n) {
    if (!ok || !n.is_prod()) return;
    int inner = 0;
    for (const auto& e : n.edges()) inner += e.child->is_gate() ? 1 : 0;
    if (inner > 1) ok = false;
  });
  return ok;
}

/// All edge scalars positive. Sufficient for monotonicity; needs an ordered field.
template <FieldDescriptor K>
bool is_syntactically_monotone(const Formula<K>& f) {
  if constexpr (!K::ordered) {
    throw FieldUnordered("syntactic monotonicity needs an ordered field, got " + f.field.name());
  } else {
    bool ok = true;
    for_each_unique<K>(f.root, [&](const Node<K>& n) {
      for (const auto& e : n.edges())
        if (!f.field.is_positive(e.weight)) ok = false;
    });
    return ok;
  }
}

/// Every gate has fan-in exactly 2 (a bare leaf qualifies).
template <FieldDescriptor K>
bool is_fanin2(const Formula<K>& f) {
  const auto& m = f.metrics();
  return f.root->is_leaf() || (m.max_fanin == 2 && m.min_fanin == 2);
}

template <FieldDescriptor K>
bool products_fanin2(const Formula<K>& f) {
  bool ok = true;
  for_each_unique<K>(f.root, [&](const Node<K>& n) {
    if (n.is_prod() && n.fanin() != 2) ok = false;
  });
  return ok;
}

/// Checks the constant-leaf conventions: a OneLeaf's parent is a sum gate
/// (enforced at construction), and a sum gate all of whose children are
/// OneLeaf is the output. Returns human-readable problems, empty if none.
template <FieldDescriptor K>
std::vector<std::string> validate(const Formula<K>& f) {
  std::vector<std::string> problems;
  for_each_unique<K>(f.root, [&](const Node<K>& n) {
    if (&n == f.root.get()) return;
    if (!n.is_sum()) return;
    bool all_one = std::all_of(n.edges().begin(), n.edges().end(),
                               [](const Edge<K>& e) { return e.child->is_one(); });
    if (all_one) problems.push_back("non-output sum gate whose children are all constant leaves");
  });
  return problems;
}

template <FieldDescriptor K>
std::vector<VarId> variables(const Formula<K>& f) {
  std::vector<VarId> vs;
  for_each_unique<K>(f.root, [&](const Node<K>& n) {
    if (n.is_var()) vs.push_back(n.var_id());
  });
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

// ---------------------------------------------------------------------------
// Term builders. A Term is coeff * node, or the constant coeff when node is
// null. Zero is represented by an empty optional, never by a node.

template <FieldDescriptor K>
struct Term {
  typename K::Scalar coeff;
  NodePtr<K> node;  // null => constant

  bool is_constant() const { return node == nullptr; }
};

/// Value of a degree-0 (variable-free) subtree.
template <FieldDescriptor K>
typename K::Scalar constant_value(const K& field, const NodePtr<K>& n) {
  switch (n->kind()) {
    case GateKind::One:
      return field.one();
    case GateKind::Var:
      throw std::logic_error("constant_value on a variable");
    case GateKind::Sum: {
      auto acc = field.zero();
      for (const auto& e : n->edges())
        acc = field.add(acc, field.mul(e.weight, constant_value(field, e.child)));
      return acc;
    }
    case GateKind::Prod: {
      auto acc = field.one();
      for (const auto& e : n->edges())
        acc = field.mul(acc, field.mul(e.weight, constant_value(field, e.child)));
      return acc;
    }
  }
  return field.zero();
}

/// Term view of a node; variable-free subtrees fold to constants.
template <FieldDescriptor K>
Term<K> as_term(const K& field, NodePtr<K> n) {
  if (n->metrics().syn_degree == 0) return Term<K>{constant_value(field, n), nullptr};
  return Term<K>{field.one(), std::move(n)};
}

template <FieldDescriptor K>
Term<K> scale(const K& field, const typename K::Scalar& c, Term<K> t) {
  t.coeff = field.mul(c, t.coeff);
  return t;
}

/// Edge carrying a term into a sum gate.
template <FieldDescriptor K>
Edge<K> sum_edge(const Term<K>& t) {
  return Edge<K>{t.coeff, t.node ? t.node : Node<K>::one()};
}

/// Product of terms, in order. Constants fold into the coefficient; a single
/// surviving factor is returned bare; otherwise one product gate.
template <FieldDescriptor K>
Term<K> mul_terms(const K& field, typename K::Scalar coeff, std::span<const Term<K>> factors) {
  std::vector<Edge<K>> edges;
  for (const auto& f : factors) {
    coeff = field.mul(coeff, f.coeff);
    if (f.node) edges.push_back(Edge<K>{field.one(), f.node});
  }
  if (edges.empty()) return Term<K>{coeff, nullptr};
  if (edges.size() == 1) return Term<K>{coeff, edges.front().child};
  return Term<K>{coeff, Node<K>::prod(std::move(edges))};
}

template <FieldDescriptor K>
Term<K> mul_terms(const K& field, std::initializer_list<Term<K>> factors) {
  std::vector<Term<K>> v(factors);
  return mul_terms<K>(field, field.one(), v);
}

/// Sum of terms. Constant terms merge into a single constant leaf; an empty
/// or fully cancelling sum yields nullopt.
template <FieldDescriptor K>
std::optional<Term<K>> add_terms(const K& field, std::span<const Term<K>> terms) {
  std::vector<Edge<K>> edges;
  auto constant = field.zero();
  bool has_constant = false;
  for (const auto& t : terms) {
    if (field.is_zero(t.coeff)) continue;
    if (!t.node) {
      constant = field.add(constant, t.coeff);
      has_constant = true;
    } else {
      edges.push_back(Edge<K>{t.coeff, t.node});
    }
  }
  if (has_constant && !field.is_zero(constant)) {
    if (edges.empty()) return Term<K>{constant, nullptr};
    edges.push_back(Edge<K>{constant, Node<K>::one()});
  }
  if (edges.empty()) return std::nullopt;
  if (edges.size() == 1) return Term<K>{edges.front().weight, edges.front().child};
  return Term<K>{field.one(), Node<K>::sum(std::move(edges))};
}

template <FieldDescriptor K>
std::optional<Term<K>> add_terms(const K& field, std::initializer_list<Term<K>> terms) {
  std::vector<Term<K>> v(terms);
  return add_terms<K>(field, v);
}

/// Turns a term into a standalone node, pushing the coefficient into the
/// root's edges where possible. A scaled leaf becomes a fan-in-1 sum.
template <FieldDescriptor K>
NodePtr<K> materialize(const K& field, const Term<K>& t) {
  if (!t.node) {
    if (field.is_one(t.coeff)) return Node<K>::one();
    return Node<K>::sum({Edge<K>{t.coeff, Node<K>::one()}});
  }
  if (field.is_one(t.coeff)) return t.node;
  if (t.node->is_sum()) {
    auto edges = t.node->edges();
    for (auto& e : edges) e.weight = field.mul(t.coeff, e.weight);
    return Node<K>::sum(std::move(edges));
  }
  if (t.node->is_prod()) {
    auto edges = t.node->edges();
    edges.front().weight = field.mul(t.coeff, edges.front().weight);
    return Node<K>::prod(std::move(edges));
  }
  return Node<K>::sum({Edge<K>{t.coeff, t.node}});
}

/// Replaces variable leaves by terms (by identifier). Variables absent from
/// the map are kept. Shared nodes are rewritten once.
template <FieldDescriptor K>
Term<K> substitute(const K& field, const NodePtr<K>& root,
                   const std::unordered_map<VarId, Term<K>>& map) {
  std::unordered_map<const Node<K>*, Term<K>> memo;
  std::function<Term<K>(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> Term<K> {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Term<K> out{field.one(), n};
    if (n->is_var()) {
      if (auto it = map.find(n->var_id()); it != map.end()) out = it->second;
    } else if (n->is_gate()) {
      std::vector<Term<K>> parts;
      parts.reserve(n->fanin());
      for (const auto& e : n->edges()) parts.push_back(scale(field, e.weight, rec(e.child)));
      if (n->is_prod()) {
        out = mul_terms<K>(field, field.one(), parts);
      } else {
        auto s = add_terms<K>(field, parts);
        if (!s) throw std::domain_error("substitution produced a zero gate");
        out = *s;
      }
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return rec(root);
}

}  // namespace logdepth
