#pragma once

#include <unordered_map>
#include <vector>

#include "logdepth/formula.hpp"

namespace logdepth {

/// Merges sum gates feeding sum gates and product gates feeding product
/// gates. Scalars distribute over the absorbed sum's edges and multiply into
/// the first edge of an absorbed product. Leaves are untouched.
template <FieldDescriptor K>
Formula<K> collapse(const Formula<K>& f) {
  const K& field = f.field;
  std::unordered_map<const Node<K>*, NodePtr<K>> memo;
  std::function<NodePtr<K>(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> NodePtr<K> {
    if (n->is_leaf()) return n;
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    std::vector<Edge<K>> edges;
    bool changed = false;
    for (const auto& e : n->edges()) {
      NodePtr<K> c = rec(e.child);
      changed |= c != e.child;
      if (c->kind() != n->kind()) {
        edges.push_back(Edge<K>{e.weight, std::move(c)});
        continue;
      }
      changed = true;
      if (n->is_sum()) {
        for (const auto& ce : c->edges()) edges.push_back(Edge<K>{field.mul(e.weight, ce.weight), ce.child});
      } else {
        bool first = true;
        for (const auto& ce : c->edges()) {
          edges.push_back(Edge<K>{first ? field.mul(e.weight, ce.weight) : ce.weight, ce.child});
          first = false;
        }
      }
    }
    NodePtr<K> out = changed ? Node<K>::gate(n->kind(), std::move(edges)) : n;
    memo.emplace(n.get(), out);
    return out;
  };
  return f.with_root(rec(f.root));
}

}  // namespace logdepth
