#pragma once

// Near-linear-size balancing for fan-in-2 formulas. A formula of size s > k
// has a unique gate alpha holding at least s - s/k leaves whose children both
// hold fewer. Cutting alpha out as y leaves F = A*y*B + C; the result is
//   A' * (beta' op gamma') * B' + C'
// with every primed piece balanced recursively.

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/transforms/binarize.hpp"
#include "logdepth/transforms/params.hpp"

namespace logdepth {

struct BBSplit {
  GatePath path;
  std::uint64_t size = 0;  // leaves below alpha
};

namespace detail {
/// size >= s - s/k, exactly.
inline bool bb_heavy(std::uint64_t size, std::uint64_t s, std::uint64_t k) {
  return static_cast<unsigned __int128>(size) * k >= static_cast<unsigned __int128>(s) * (k - 1);
}
}  // namespace detail

/// Scans every gate. More than one qualifying gate means the formula is not
/// what it claims to be and raises std::logic_error.
template <FieldDescriptor K>
BBSplit bb_find_split(const Formula<K>& f, std::uint64_t k) {
  if (k < 2) throw ParamOutOfRange("k must be at least 2");
  const std::uint64_t s = f.metrics().size;
  if (s <= k) throw TooSmall("size " + std::to_string(s) + " does not exceed k = " + std::to_string(k));
  std::vector<BBSplit> found;
  for_each_occurrence<K>(f.root, [&](const GatePath& p, const NodePtr<K>& n) {
    if (n->is_leaf() || !detail::bb_heavy(n->metrics().size, s, k)) return;
    for (const auto& e : n->edges())
      if (detail::bb_heavy(e.child->metrics().size, s, k)) return;
    found.push_back(BBSplit{p, n->metrics().size});
  });
  if (found.size() != 1)
    throw std::logic_error("split gate is not unique: " + std::to_string(found.size()) + " candidates");
  return found.front();
}

/// F = A * F_alpha * B + C. A and B are terms (a null node is a constant);
/// C is absent when F vanishes at alpha = 0.
template <FieldDescriptor K>
struct BBDecomposition {
  Term<K> a;
  Term<K> b;
  std::optional<Term<K>> c;
  NodePtr<K> alpha;
};

template <FieldDescriptor K>
BBDecomposition<K> bb_decompose(const Formula<K>& f, const GatePath& path) {
  const K& field = f.field;
  std::vector<NodePtr<K>> chain{f.root};
  for (auto i : path) {
    if (i >= chain.back()->fanin()) throw std::out_of_range("gate path leaves the tree");
    chain.push_back(chain.back()->edges()[i].child);
  }
  BBDecomposition<K> d{Term<K>{field.one(), nullptr}, Term<K>{field.one(), nullptr}, std::nullopt, chain.back()};
  for (std::size_t level = path.size(); level-- > 0;) {
    const auto& g = chain[level];
    const std::uint32_t idx = path[level];
    const auto& on_path = g->edges()[idx];
    if (g->is_sum()) {
      d.a = scale(field, on_path.weight, d.a);
      std::vector<Term<K>> parts;
      if (d.c) parts.push_back(scale(field, on_path.weight, *d.c));
      for (std::uint32_t j = 0; j < g->fanin(); ++j)
        if (j != idx) parts.push_back(scale(field, g->edges()[j].weight, as_term(field, g->edges()[j].child)));
      d.c = add_terms<K>(field, parts);
    } else {
      std::vector<Term<K>> left, right;
      for (std::uint32_t j = 0; j < g->fanin(); ++j) {
        if (j == idx) continue;
        auto t = scale(field, g->edges()[j].weight, as_term(field, g->edges()[j].child));
        (j < idx ? left : right).push_back(std::move(t));
      }
      std::vector<Term<K>> fa = left;
      fa.push_back(d.a);
      d.a = mul_terms<K>(field, on_path.weight, fa);
      std::vector<Term<K>> fb{d.b};
      fb.insert(fb.end(), right.begin(), right.end());
      d.b = mul_terms<K>(field, field.one(), fb);
      if (d.c) {
        std::vector<Term<K>> fc = left;
        fc.push_back(*d.c);
        fc.insert(fc.end(), right.begin(), right.end());
        d.c = mul_terms<K>(field, on_path.weight, fc);
      }
    }
  }
  return d;
}

template <FieldDescriptor K>
struct BBResult {
  Formula<K> formula;
  std::uint64_t k = 0;
};

/// Input of any fan-in is binarized first. Formulas of size at most k are
/// returned as they are.
template <FieldDescriptor K>
BBResult<K> depth_reduce_bb(const Formula<K>& input, const mpq_class& eps) {
  const std::uint64_t k = k_bb(eps);
  const Formula<K> f = is_fanin2(input) ? input : binarize(input);
  const K& field = f.field;
  std::function<Term<K>(const Term<K>&)> rec_term;
  std::function<Term<K>(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> Term<K> {
    if (n->metrics().size <= k) return Term<K>{field.one(), n};
    Formula<K> sub = f.with_root(n);
    BBSplit split = bb_find_split(sub, k);
    auto d = bb_decompose(sub, split.path);
    const auto& alpha = d.alpha;
    std::vector<Term<K>> kids;
    for (const auto& e : alpha->edges()) kids.push_back(scale(field, e.weight, rec(e.child)));
    Term<K> star;
    if (alpha->is_prod()) {
      star = mul_terms<K>(field, field.one(), kids);
    } else {
      auto s = add_terms<K>(field, kids);
      if (!s) throw std::domain_error("sum gate cancels to zero");
      star = *s;
    }
    Term<K> left = mul_terms<K>(field, {rec_term(d.a), star});
    Term<K> main = mul_terms<K>(field, {left, rec_term(d.b)});
    if (!d.c) return main;
    auto total = add_terms<K>(field, {main, rec_term(*d.c)});
    if (!total) throw std::domain_error("balanced formula cancels to zero");
    return *total;
  };
  rec_term = [&](const Term<K>& t) -> Term<K> {
    if (!t.node) return t;
    return scale(field, t.coeff, rec(t.node));
  };
  return BBResult<K>{f.with_root(materialize(field, rec(f.root))), k};
}

}  // namespace logdepth
