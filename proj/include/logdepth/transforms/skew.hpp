#pragma once

// Expansion of skew formulas into sums of products.

#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/formula.hpp"

namespace logdepth {

/// Leaf variables of a skew formula split by whether they can repeat across
/// the terms of its expansion. Non-duplicable: a leaf under a sum, a leaf
/// whose product siblings are all leaves, or a bare-leaf formula.
struct LeafClasses {
  std::vector<VarId> non_duplicable;
  std::vector<VarId> duplicable;
};

template <FieldDescriptor K>
LeafClasses classify_leaves(const Formula<K>& g) {
  LeafClasses out;
  if (g.root->is_var()) {
    out.non_duplicable.push_back(g.root->var_id());
    return out;
  }
  for_each_unique<K>(g.root, [&](const Node<K>& n) {
    if (n.is_leaf()) return;
    bool all_leaves = std::all_of(n.edges().begin(), n.edges().end(),
                                  [](const Edge<K>& e) { return e.child->is_leaf(); });
    for (const auto& e : n.edges()) {
      if (!e.child->is_var()) continue;
      if (n.is_sum() || all_leaves)
        out.non_duplicable.push_back(e.child->var_id());
      else
        out.duplicable.push_back(e.child->var_id());
    }
  });
  return out;
}

/// Rewrites a skew formula whose variable leaves are pairwise distinct as one
/// sum of products, one product per parse tree (constant parse trees merge
/// into a single constant leaf). Factor order within each product follows the
/// leaves left to right. A single surviving term is returned without the sum.
template <FieldDescriptor K>
Formula<K> skew_to_sigma_pi(const Formula<K>& g) {
  if (!is_skew(g)) throw NotSkew("formula has a product gate with two non-leaf children");
  {
    std::unordered_set<VarId> seen;
    std::vector<VarId> dup;
    for_each_occurrence<K>(g.root, [&](const GatePath&, const NodePtr<K>& n) {
      if (n->is_var() && !seen.insert(n->var_id()).second) dup.push_back(n->var_id());
    });
    if (!dup.empty()) throw DuplicateLeafVariable("variable " + var::name(dup.front()) + " labels two leaves");
  }
  const K& field = g.field;

  struct Partial {
    typename K::Scalar coeff;
    std::vector<NodePtr<K>> factors;
  };
  // Parse trees of a skew formula are combs; enumerate them left to right.
  std::function<std::vector<Partial>(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> std::vector<Partial> {
    if (n->is_var()) return {Partial{field.one(), {n}}};
    if (n->is_one()) return {Partial{field.one(), {}}};
    if (n->is_sum()) {
      std::vector<Partial> out;
      for (const auto& e : n->edges())
        for (auto& p : rec(e.child)) out.push_back(Partial{field.mul(e.weight, p.coeff), std::move(p.factors)});
      return out;
    }
    std::vector<Partial> acc{Partial{field.one(), {}}};
    for (const auto& e : n->edges()) {
      auto part = rec(e.child);
      std::vector<Partial> next;
      for (const auto& a : acc)
        for (const auto& b : part) {
          Partial p{field.mul(field.mul(a.coeff, e.weight), b.coeff), a.factors};
          p.factors.insert(p.factors.end(), b.factors.begin(), b.factors.end());
          next.push_back(std::move(p));
        }
      acc = std::move(next);
    }
    return acc;
  };

  std::vector<Term<K>> terms;
  for (auto& p : rec(g.root)) {
    std::vector<Term<K>> factors;
    for (auto& x : p.factors) factors.push_back(Term<K>{field.one(), std::move(x)});
    terms.push_back(mul_terms<K>(field, p.coeff, factors));
  }
  auto total = add_terms<K>(field, terms);
  if (!total) throw std::domain_error("skew formula expands to zero");
  return g.with_root(materialize(field, *total));
}

}  // namespace logdepth
