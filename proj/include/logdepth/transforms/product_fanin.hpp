#pragma once

#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "logdepth/formula.hpp"

namespace logdepth {

/// Splits every product at the first child where the running degree reaches
/// half the total, recursing on the left run, that child, and the right run,
/// then multiplies the three as ((L * M) * R). Sum gates keep their fan-in.
/// Factor order is preserved.
template <FieldDescriptor K>
Formula<K> product_fanin_2(const Formula<K>& f) {
  const K& field = f.field;
  std::unordered_map<const Node<K>*, Term<K>> memo;
  std::function<Term<K>(const NodePtr<K>&)> rec;
  std::function<Term<K>(std::span<const Edge<K>>)> run = [&](std::span<const Edge<K>> xs) -> Term<K> {
    if (xs.empty()) return Term<K>{field.one(), nullptr};
    if (xs.size() == 1) return scale(field, xs[0].weight, rec(xs[0].child));
    std::uint64_t d = 0;
    for (const auto& e : xs) d += e.child->metrics().syn_degree;
    std::size_t m = 0;
    std::uint64_t prefix = 0;
    for (; m < xs.size(); ++m) {
      prefix += xs[m].child->metrics().syn_degree;
      if (2 * prefix >= d) break;
    }
    Term<K> l = run(xs.subspan(0, m));
    Term<K> mid = scale(field, xs[m].weight, rec(xs[m].child));
    Term<K> r = run(xs.subspan(m + 1));
    return mul_terms<K>(field, {mul_terms<K>(field, {l, mid}), r});
  };
  rec = [&](const NodePtr<K>& n) -> Term<K> {
    if (n->is_leaf() || n->metrics().syn_degree == 0) return as_term(field, n);
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Term<K> out;
    if (n->is_prod()) {
      out = run(n->edges());
    } else {
      std::vector<Term<K>> parts;
      for (const auto& e : n->edges()) parts.push_back(scale(field, e.weight, rec(e.child)));
      auto s = add_terms<K>(field, parts);
      if (!s) throw std::domain_error("sum gate cancels to zero");
      out = *s;
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return f.with_root(materialize(field, rec(f.root)));
}

}  // namespace logdepth
