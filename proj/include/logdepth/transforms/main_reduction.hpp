#pragma once

// Potential-guided depth reduction. A gate's potential is
//   phi = ceil(log2 d) + ceil(sum_depth / delta).
// The gates where the potential first drops are cut out and reduced
// recursively; what remains above them is skew with at most delta sum
// layers, so it expands into one sum of products, into which the reduced
// pieces are substituted back.

#include <gmpxx.h>

#include <functional>
#include <unordered_map>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/transforms/params.hpp"
#include "logdepth/transforms/skew.hpp"

namespace logdepth {

struct Potential {
  std::uint32_t phi1 = 0;
  std::uint32_t phi2 = 0;
  std::uint32_t phi = 0;
};

inline Potential potential(const GateMetrics& m, std::uint32_t delta) {
  if (delta == 0) throw ParamOutOfRange("delta must be positive");
  Potential p;
  p.phi1 = ceil_log2(m.syn_degree);
  p.phi2 = (m.sum_depth + delta - 1) / delta;
  p.phi = p.phi1 + p.phi2;
  return p;
}

template <FieldDescriptor K>
Potential potential(const Formula<K>& f, std::uint32_t delta) {
  return potential(f.metrics(), delta);
}

struct FrontierSet {
  std::vector<GatePath> members;  // preorder
};

/// Non-constant gates and variable leaves whose potential is below the
/// root's while their parent's equals it. Constant-only subtrees never
/// qualify.
template <FieldDescriptor K>
FrontierSet select_frontier(const Formula<K>& f, std::uint32_t delta) {
  FrontierSet out;
  const auto top = potential(f, delta).phi;
  GatePath path;
  std::function<void(const NodePtr<K>&)> rec = [&](const NodePtr<K>& n) {
    for (std::uint32_t i = 0; i < n->fanin(); ++i) {
      const auto& c = n->edges()[i].child;
      if (c->metrics().syn_degree == 0) continue;
      path.push_back(i);
      if (potential(c->metrics(), delta).phi < top)
        out.members.push_back(path);
      else
        rec(c);
      path.pop_back();
    }
  };
  rec(f.root);
  return out;
}

template <FieldDescriptor K>
struct MainResult {
  Formula<K> formula;
  std::uint32_t delta = 1;
  Potential phi;          // of the input
  mpz_class size_bound;   // s * d^delta
};

namespace detail {

template <FieldDescriptor K>
class MainReducer {
 public:
  MainReducer(const K& field, Mode mode, std::uint32_t delta) : field_(field), mode_(mode), delta_(delta) {}

  Term<K> reduce(const NodePtr<K>& n) {
    if (n->is_leaf() || n->metrics().syn_degree == 0) return as_term(field_, n);
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    const auto& m = n->metrics();
    const auto phi = potential(m, delta_).phi;

    // Copy the region of full potential; cut below it.
    std::unordered_map<VarId, Term<K>> cut;
    std::uint64_t next_id = 0;
    std::function<Term<K>(const NodePtr<K>&)> copy = [&](const NodePtr<K>& c) -> Term<K> {
      if (c->is_one() || c->metrics().syn_degree == 0) return as_term(field_, c);
      if (c->is_var() || potential(c->metrics(), delta_).phi < phi) {
        VarId y = var::fresh(next_id++);
        cut.emplace(y, reduce(c));
        return Term<K>{field_.one(), Node<K>::var(y)};
      }
      std::vector<Term<K>> parts;
      for (const auto& e : c->edges()) parts.push_back(scale(field_, e.weight, copy(e.child)));
      if (c->is_prod()) return mul_terms<K>(field_, field_.one(), parts);
      auto s = add_terms<K>(field_, parts);
      if (!s) throw std::domain_error("sum gate cancels to zero");
      return *s;
    };
    Term<K> g = copy(n);
    Formula<K> residual{field_, mode_, materialize(field_, g)};
    Formula<K> flat = skew_to_sigma_pi(residual);
    Term<K> out = substitute(field_, flat.root, cut);

    check(n, out, phi);
    memo_.emplace(n.get(), out);
    return out;
  }

 private:
  void check(const NodePtr<K>& in, const Term<K>& out, std::uint32_t phi) const {
    if (out.is_constant()) return;
    const auto& mi = in->metrics();
    const auto& mo = out.node->metrics();
    // A scaled leaf materializes as a fan-in-1 sum; product depth is unaffected.
    if (mo.product_depth > phi)
      throw BoundViolation("main reduction: product depth " + std::to_string(mo.product_depth) +
                           " exceeds potential " + std::to_string(phi));
    mpz_class bound = mpz_class(static_cast<unsigned long>(mi.size)) * pow_mpz(mi.syn_degree, delta_);
    if (mpz_class(static_cast<unsigned long>(mo.size)) > bound)
      throw BoundViolation("main reduction: size " + std::to_string(mo.size) + " exceeds s*d^delta = " +
                           bound.get_str());
    if (mo.syn_degree > mi.syn_degree)
      throw BoundViolation("main reduction: syntactic degree grew from " + std::to_string(mi.syn_degree) +
                           " to " + std::to_string(mo.syn_degree));
  }

  const K& field_;
  Mode mode_;
  std::uint32_t delta_;
  std::unordered_map<const Node<K>*, Term<K>> memo_;
};

}  // namespace detail

/// Product depth of the result is at most phi_delta(F) and its size at most
/// s * d^delta; both are checked on every recursive piece and a violation
/// throws BoundViolation. Gates must have fan-in at most 2.
template <FieldDescriptor K>
MainResult<K> depth_reduce_main(const Formula<K>& f, std::uint32_t delta) {
  if (delta == 0) throw ParamOutOfRange("delta must be positive");
  const auto& m = f.metrics();
  if (m.max_fanin > 2) throw std::invalid_argument("main reduction needs gates of fan-in at most 2");
  if (m.syn_degree == 0) throw ParamOutOfRange("main reduction needs syntactic degree at least 1");
  detail::MainReducer<K> r(f.field, f.mode, delta);
  Term<K> out = r.reduce(f.root);
  MainResult<K> res{f.with_root(materialize(f.field, out)), delta, potential(f, delta),
                    mpz_class(static_cast<unsigned long>(m.size)) * pow_mpz(m.syn_degree, delta)};
  return res;
}

/// delta = ceil(log2 s / log2 d).
template <FieldDescriptor K>
MainResult<K> depth_reduce_main_auto(const Formula<K>& f) {
  const auto& m = f.metrics();
  return depth_reduce_main(f, auto_delta(m.size, m.syn_degree, m.sum_depth));
}

}  // namespace logdepth
