#pragma once

// Exact semantics of formulas: sparse expansion, parse-tree enumeration, and
// the predicates defined through them.

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/poly.hpp"

namespace logdepth {

inline constexpr std::size_t kDefaultExpandBudget = 1'000'000;
inline constexpr std::size_t kDefaultParseTreeBudget = 100'000;

namespace detail {

/// Post-order expansion into field K2, with `weight` mapping edge scalars.
/// Intermediate tables are dropped as soon as their last parent is built.
template <FieldDescriptor K, FieldDescriptor K2, class WeightFn>
PolyTable<K2> expand_into(const NodePtr<K>& root, const K2& field, Mode mode, WeightFn weight,
                          std::size_t budget) {
  std::unordered_map<const Node<K>*, std::size_t> uses;
  for_each_unique<K>(root, [&](const Node<K>& n) {
    for (const auto& e : n.edges()) ++uses[e.child.get()];
  });
  std::unordered_map<const Node<K>*, PolyTable<K2>> memo;
  auto check = [&](const PolyTable<K2>& p) {
    if (p.size() > budget)
      throw BudgetExceeded("expansion exceeds budget of " + std::to_string(budget) + " terms");
  };
  auto release = [&](const Node<K>* child) {
    if (--uses[child] == 0) memo.erase(child);
  };
  std::function<const PolyTable<K2>&(const NodePtr<K>&)> rec =
      [&](const NodePtr<K>& n) -> const PolyTable<K2>& {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    PolyTable<K2> out(field, mode);
    switch (n->kind()) {
      case GateKind::Var:
        out.add_term(Monomial{n->var_id()}, field.one());
        break;
      case GateKind::One:
        out.add_term(Monomial{}, field.one());
        break;
      case GateKind::Sum:
        for (const auto& e : n->edges()) {
          out.add_scaled(rec(e.child), weight(e.weight));
          check(out);
        }
        for (const auto& e : n->edges()) release(e.child.get());
        break;
      case GateKind::Prod: {
        auto c = field.one();
        for (const auto& e : n->edges()) c = field.mul(c, weight(e.weight));
        out.add_term(Monomial{}, c);
        for (const auto& e : n->edges()) out = out.times(rec(e.child), budget);
        for (const auto& e : n->edges()) release(e.child.get());
        break;
      }
    }
    check(out);
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  PolyTable<K2> result = rec(root);
  return result;
}

}  // namespace detail

/// Exact polynomial computed by `f`, in its field and mode.
template <FieldDescriptor K>
PolyTable<K> expand(const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  return detail::expand_into<K>(f.root, f.field, f.mode,
                                [](const typename K::Scalar& w) { return w; }, budget);
}

template <FieldDescriptor K>
PolyTable<K> expand(const K& field, Mode mode, const NodePtr<K>& root,
                    std::size_t budget = kDefaultExpandBudget) {
  return expand(Formula<K>{field, mode, root}, budget);
}

/// Parse-tree multiplicities: every edge weight read as 1, over Q. The
/// support of the result is exactly the set of parse-tree monomials.
template <FieldDescriptor K>
PolyTable<Rationals> expand_support(const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  return detail::expand_into<K>(f.root, Rationals{}, f.mode,
                                [](const typename K::Scalar&) { return mpq_class(1); }, budget);
}

/// Number of parse trees (saturating).
template <FieldDescriptor K>
std::uint64_t count_parse_trees(const Formula<K>& f) {
  std::unordered_map<const Node<K>*, std::uint64_t> memo;
  std::function<std::uint64_t(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> std::uint64_t {
    if (n->is_leaf()) return 1;
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    std::uint64_t c = n->is_sum() ? 0 : 1;
    for (const auto& e : n->edges())
      c = n->is_sum() ? detail::sat_add(c, rec(e.child)) : detail::sat_mul(c, rec(e.child));
    memo.emplace(n.get(), c);
    return c;
  };
  return rec(f.root);
}

template <FieldDescriptor K>
struct ParseTreeEntry {
  typename K::Scalar coeff;
  Monomial monomial;
};

/// One entry per parse tree: product of its edge scalars and of its leaf
/// variables (sorted in commutative mode).
template <FieldDescriptor K>
std::vector<ParseTreeEntry<K>> enumerate_parse_trees(const Formula<K>& f,
                                                     std::size_t budget = kDefaultParseTreeBudget) {
  if (count_parse_trees(f) > budget)
    throw BudgetExceeded("parse trees exceed budget of " + std::to_string(budget));
  const K& field = f.field;
  std::function<std::vector<ParseTreeEntry<K>>(const NodePtr<K>&)> rec =
      [&](const NodePtr<K>& n) -> std::vector<ParseTreeEntry<K>> {
    switch (n->kind()) {
      case GateKind::Var:
        return {ParseTreeEntry<K>{field.one(), Monomial{n->var_id()}}};
      case GateKind::One:
        return {ParseTreeEntry<K>{field.one(), Monomial{}}};
      case GateKind::Sum: {
        std::vector<ParseTreeEntry<K>> out;
        for (const auto& e : n->edges())
          for (auto& t : rec(e.child)) out.push_back({field.mul(e.weight, t.coeff), std::move(t.monomial)});
        return out;
      }
      case GateKind::Prod: {
        std::vector<ParseTreeEntry<K>> acc{ParseTreeEntry<K>{field.one(), Monomial{}}};
        for (const auto& e : n->edges()) {
          auto part = rec(e.child);
          std::vector<ParseTreeEntry<K>> next;
          next.reserve(acc.size() * part.size());
          for (const auto& a : acc)
            for (const auto& b : part) {
              Monomial m = a.monomial;
              m.insert(m.end(), b.monomial.begin(), b.monomial.end());
              next.push_back({field.mul(field.mul(a.coeff, e.weight), b.coeff), std::move(m)});
            }
          acc = std::move(next);
        }
        return acc;
      }
    }
    return {};
  };
  auto out = rec(f.root);
  if (f.mode == Mode::Commutative)
    for (auto& t : out) std::sort(t.monomial.begin(), t.monomial.end());
  return out;
}

/// Exact equality of the computed polynomials.
template <FieldDescriptor K>
bool equal_expand(const Formula<K>& a, const Formula<K>& b, std::size_t budget = kDefaultExpandBudget) {
  if (a.mode != b.mode) throw ModeMismatch("cannot compare commutative with non-commutative formulas");
  if (!(a.field == b.field)) throw ModeMismatch("formulas live over different fields");
  return expand(a, budget) == expand(b, budget);
}

enum class MonotoneCheck { Syntactic, Semantic };

/// Syntactic: all scalars positive (ordered fields only). Semantic: every
/// parse-tree monomial survives in the expansion.
template <FieldDescriptor K>
bool is_monotone(const Formula<K>& f, MonotoneCheck how, std::size_t budget = kDefaultExpandBudget) {
  if (how == MonotoneCheck::Syntactic) return is_syntactically_monotone(f);
  auto poly = expand(f, budget);
  auto support = expand_support(f, budget);
  for (const auto& [m, count] : support.terms())
    if (f.field.is_zero(poly.coefficient(m))) return false;
  return true;
}

/// Every monomial takes exactly one variable from each block.
template <FieldDescriptor K>
bool is_set_multilinear(const Formula<K>& f, const std::vector<std::vector<VarId>>& partition,
                        std::size_t budget = kDefaultExpandBudget) {
  std::unordered_map<VarId, std::size_t> block;
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (VarId v : partition[i])
      if (!block.emplace(v, i).second)
        throw std::invalid_argument("partition blocks overlap at " + var::name(v));
  for (VarId v : variables(f))
    if (!block.count(v)) throw std::invalid_argument("partition misses variable " + var::name(v));
  auto poly = expand(f, budget);
  std::vector<std::size_t> hits(partition.size());
  for (const auto& [m, c] : poly.terms()) {
    std::fill(hits.begin(), hits.end(), 0);
    for (VarId v : m) ++hits[block.at(v)];
    for (auto h : hits)
      if (h != 1) return false;
  }
  return true;
}

/// Semantic homogeneity: all monomials of the expansion share one degree.
template <FieldDescriptor K>
bool computes_homogeneous(const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  return expand(f, budget).degrees().size() <= 1;
}

/// Per distinct node: the number of monomials it computes and its degree.
template <FieldDescriptor K>
struct NodeExpansionInfo {
  std::uint64_t monomials = 0;
  std::size_t degree = 0;  // max monomial degree
  std::uint64_t syn_degree = 0;
};

template <FieldDescriptor K>
std::unordered_map<const Node<K>*, NodeExpansionInfo<K>> node_expansion_info(
    const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  std::unordered_map<const Node<K>*, PolyTable<K>> memo;
  std::unordered_map<const Node<K>*, NodeExpansionInfo<K>> info;
  std::function<const PolyTable<K>&(const NodePtr<K>&)> rec =
      [&](const NodePtr<K>& n) -> const PolyTable<K>& {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    PolyTable<K> out(f.field, f.mode);
    if (n->is_var()) {
      out.add_term(Monomial{n->var_id()}, f.field.one());
    } else if (n->is_one()) {
      out.add_term(Monomial{}, f.field.one());
    } else if (n->is_sum()) {
      for (const auto& e : n->edges()) out.add_scaled(rec(e.child), e.weight);
    } else {
      out.add_term(Monomial{}, f.field.one());
      for (const auto& e : n->edges()) out = out.times(rec(e.child).scaled(e.weight), budget);
    }
    if (out.size() > budget)
      throw BudgetExceeded("gate expansion exceeds budget of " + std::to_string(budget));
    info[n.get()] = NodeExpansionInfo<K>{out.size(), out.max_degree(), n->metrics().syn_degree};
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  rec(f.root);
  return info;
}

struct GateMonomialCount {
  GatePath path;
  std::uint64_t monomials;
  std::size_t degree;
  std::uint64_t syn_degree;
};

/// Monomial count of every gate occurrence, preorder (leaves included).
template <FieldDescriptor K>
std::vector<GateMonomialCount> gate_monomial_counts(const Formula<K>& f,
                                                    std::size_t budget = kDefaultExpandBudget) {
  auto info = node_expansion_info(f, budget);
  std::vector<GateMonomialCount> out;
  for_each_occurrence<K>(f.root, [&](const GatePath& p, const NodePtr<K>& n) {
    const auto& i = info.at(n.get());
    out.push_back(GateMonomialCount{p, i.monomials, i.degree, i.syn_degree});
  });
  return out;
}

/// True when some gate computes the zero polynomial.
template <FieldDescriptor K>
bool has_zero_gate(const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  auto info = node_expansion_info(f, budget);
  for (const auto& [n, i] : info)
    if (i.monomials == 0) return true;
  return false;
}

}  // namespace logdepth
