#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "logdepth/formula.hpp"

namespace logdepth {

namespace detail {

/// Balanced binary tree of `kind` gates over `edges[lo, hi)`.
template <FieldDescriptor K>
NodePtr<K> balanced(const K& field, GateKind kind, std::span<const Edge<K>> edges) {
  if (edges.size() == 2) return Node<K>::gate(kind, {edges[0], edges[1]});
  const std::size_t mid = (edges.size() + 1) / 2;
  auto left = edges.subspan(0, mid);
  auto right = edges.subspan(mid);
  auto side = [&](std::span<const Edge<K>> part) -> Edge<K> {
    if (part.size() == 1) return part.front();
    return Edge<K>{field.one(), balanced(field, kind, part)};
  };
  return Node<K>::gate(kind, {side(left), side(right)});
}

}  // namespace detail

/// Every gate gets fan-in exactly 2: wider gates become balanced trees, fan-in-1
/// gates are absorbed into the parent edge, constant children of a product
/// fold into its scalar, and constant leaves under one sum merge into one.
/// A fan-in-2 input without constant-only gates comes back unchanged.
template <FieldDescriptor K>
Formula<K> binarize(const Formula<K>& f) {
  const K& field = f.field;
  std::unordered_map<const Node<K>*, Term<K>> memo;
  std::function<Term<K>(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> Term<K> {
    if (n->is_leaf() || n->metrics().syn_degree == 0) return as_term(field, n);
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    std::vector<Edge<K>> edges;
    auto coeff = field.one();
    bool has_constant = false;
    auto constant = field.zero();
    for (const auto& e : n->edges()) {
      Term<K> t = rec(e.child);
      auto w = field.mul(e.weight, t.coeff);
      if (t.node) {
        edges.push_back(Edge<K>{w, t.node});
      } else if (n->is_prod()) {
        coeff = field.mul(coeff, w);
      } else {
        constant = field.add(constant, w);
        has_constant = true;
      }
    }
    if (n->is_sum() && has_constant && !field.is_zero(constant))
      edges.push_back(Edge<K>{constant, Node<K>::one()});
    Term<K> out;
    if (edges.empty()) {
      out = Term<K>{n->is_prod() ? coeff : field.zero(), nullptr};
      if (n->is_sum()) throw std::domain_error("binarize: sum gate cancels to zero");
    } else if (edges.size() == 1) {
      out = Term<K>{field.mul(coeff, edges.front().weight), edges.front().child};
    } else {
      out = Term<K>{coeff, detail::balanced<K>(field, n->kind(), edges)};
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return f.with_root(materialize(field, rec(f.root)));
}

}  // namespace logdepth
