#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/transforms/params.hpp"

namespace logdepth {

template <FieldDescriptor K>
struct HomogenizeResult {
  /// components[i]: a homogeneous formula of degree i, or empty when no parse
  /// tree has degree i.
  std::vector<std::optional<Formula<K>>> components;
  std::uint64_t total_size = 0;
  mpz_class size_bound;  // s * binom(product_depth + d + 1, d)
};

/// Degree-i part of every gate up to `target_d`: sums act componentwise and a
/// product of two children convolves their parts. Subtrees are duplicated, so
/// the output is a tree. Product gates must have fan-in at most 2.
template <FieldDescriptor K>
HomogenizeResult<K> homogenize(const Formula<K>& f, std::uint32_t target_d) {
  const K& field = f.field;
  if (!f.root->is_leaf()) {
    bool ok = true;
    for_each_unique<K>(f.root, [&](const Node<K>& n) {
      if (n.is_prod() && n.fanin() > 2) ok = false;
    });
    if (!ok) throw std::invalid_argument("homogenize needs product gates of fan-in at most 2");
  }
  using Parts = std::vector<std::optional<Term<K>>>;
  std::unordered_map<const Node<K>*, Parts> memo;
  std::function<const Parts&(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) -> const Parts& {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Parts out(target_d + 1);
    switch (n->kind()) {
      case GateKind::Var:
        if (target_d >= 1) out[1] = Term<K>{field.one(), n};
        break;
      case GateKind::One:
        out[0] = Term<K>{field.one(), nullptr};
        break;
      case GateKind::Sum:
        for (std::uint32_t i = 0; i <= target_d; ++i) {
          std::vector<Term<K>> terms;
          for (const auto& e : n->edges())
            if (const auto& c = rec(e.child)[i]) terms.push_back(scale(field, e.weight, *c));
          if (!terms.empty()) out[i] = add_terms<K>(field, terms);
        }
        break;
      case GateKind::Prod: {
        const auto& e0 = n->edges()[0];
        const Parts& left = rec(e0.child);
        if (n->fanin() == 1) {
          for (std::uint32_t i = 0; i <= target_d; ++i)
            if (left[i]) out[i] = scale(field, e0.weight, *left[i]);
          break;
        }
        const auto& e1 = n->edges()[1];
        const Parts& right = rec(e1.child);
        const auto w = field.mul(e0.weight, e1.weight);
        for (std::uint32_t i = 0; i <= target_d; ++i) {
          std::vector<Term<K>> terms;
          for (std::uint32_t j = 0; j <= i; ++j)
            if (left[j] && right[i - j]) terms.push_back(mul_terms<K>(field, w, std::vector<Term<K>>{*left[j], *right[i - j]}));
          if (!terms.empty()) out[i] = add_terms<K>(field, terms);
        }
        break;
      }
    }
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  const Parts& top = rec(f.root);

  HomogenizeResult<K> res;
  const auto& m = f.metrics();
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), m.product_depth + target_d + 1, target_d);
  res.size_bound = mpz_class(static_cast<unsigned long>(m.size)) * binom;
  for (const auto& t : top) {
    if (!t) {
      res.components.emplace_back();
      continue;
    }
    auto c = f.with_root(materialize(field, *t));
    res.total_size = detail::sat_add(res.total_size, c.metrics().size);
    res.components.emplace_back(std::move(c));
  }
  if (mpz_class(static_cast<unsigned long>(res.total_size)) > res.size_bound)
    throw BoundViolation("homogenize: total size " + std::to_string(res.total_size) + " exceeds " +
                         res.size_bound.get_str());
  return res;
}

}  // namespace logdepth
