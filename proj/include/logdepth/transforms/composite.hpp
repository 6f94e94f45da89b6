#pragma once

#include <gmpxx.h>

#include <string>

#include "logdepth/errors.hpp"
#include "logdepth/expand.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/transforms/binarize.hpp"
#include "logdepth/transforms/bonet_buss.hpp"
#include "logdepth/transforms/collapse.hpp"
#include "logdepth/transforms/homogenize.hpp"
#include "logdepth/transforms/main_reduction.hpp"
#include "logdepth/transforms/params.hpp"

namespace logdepth {

/// Output of a multi-stage pass together with the parameters it settled on.
template <FieldDescriptor K>
struct CompositeResult {
  Formula<K> formula;
  std::uint64_t bb_k = 0;
  std::uint64_t size_after_bb = 0;
  std::optional<std::uint32_t> delta;  // empty when the main reduction was skipped
  std::optional<Potential> phi;
  std::string branch;
};

/// binarize, balance with eps = 1/2, main reduction with the smallest delta
/// such that d^delta >= s' (s' the balanced size), then collapse. The result
/// has at most s'^2 * d leaves. Degree 1 stops after balancing.
template <FieldDescriptor K>
CompositeResult<K> depth_reduce_homogeneous(const Formula<K>& f) {
  CompositeResult<K> res{f, 0, 0, std::nullopt, std::nullopt, "bb+main"};
  auto bb = depth_reduce_bb(binarize(f), mpq_class(1, 2));
  res.bb_k = bb.k;
  const auto& mb = bb.formula.metrics();
  res.size_after_bb = mb.size;
  if (mb.syn_degree <= 1) {
    res.formula = collapse(bb.formula);
    res.branch = "bb";
    return res;
  }
  const std::uint32_t delta = auto_delta(mb.size, mb.syn_degree, mb.sum_depth);
  auto main = depth_reduce_main(bb.formula, delta);
  res.delta = delta;
  res.phi = main.phi;
  res.formula = collapse(main.formula);
  mpz_class cap = mpz_class(static_cast<unsigned long>(mb.size)) * mb.size * static_cast<unsigned long>(mb.syn_degree);
  if (mpz_class(static_cast<unsigned long>(res.formula.metrics().size)) > cap)
    throw BoundViolation("homogeneous reduction: size exceeds s'^2 * d = " + cap.get_str());
  return res;
}

/// d^(4/eps) >= s: balancing alone. Otherwise balance with eps/2, then the main
/// reduction with delta = floor(eps * log2 s / (2 log2 d)), then collapse.
/// Both comparisons are done exactly on integers.
template <FieldDescriptor K>
CompositeResult<K> depth_reduce_nearlinear(const Formula<K>& f, const mpq_class& eps) {
  check_epsilon(eps);
  const auto& m = f.metrics();
  const std::uint64_t s = m.size, d = m.syn_degree;
  if (d == 0) throw ParamOutOfRange("near-linear reduction needs syntactic degree at least 1");
  const unsigned long p = eps.get_num().get_ui(), q = eps.get_den().get_ui();
  CompositeResult<K> res{f, 0, 0, std::nullopt, std::nullopt, "bb"};
  // d^(4/eps) >= s  <=>  d^(4q) >= s^p
  if (d == 1 || pow_mpz(d, 4 * q) >= pow_mpz(s, p)) {
    auto bb = depth_reduce_bb(f, eps);
    res.bb_k = bb.k;
    res.size_after_bb = bb.formula.metrics().size;
    res.formula = bb.formula;
    return res;
  }
  // delta = max{t : d^(2t) <= s^eps} = max{t : d^(2tq) <= s^p}
  const mpz_class sp = pow_mpz(s, p);
  std::uint32_t delta = 0;
  while (pow_mpz(d, 2 * q * (delta + 1)) <= sp) ++delta;
  auto bb = depth_reduce_bb(f, eps / 2);
  res.bb_k = bb.k;
  res.size_after_bb = bb.formula.metrics().size;
  auto main = depth_reduce_main(bb.formula, delta);
  res.delta = delta;
  res.phi = main.phi;
  res.formula = collapse(main.formula);
  res.branch = "bb+main";
  return res;
}

/// For a formula whose polynomial is homogeneous of degree d >= 1 but whose
/// gates need not be: binarize, balance, keep the degree-d component, then
/// binarize, main reduction with automatic delta, collapse.
template <FieldDescriptor K>
CompositeResult<K> pipeline_inhom(const Formula<K>& f, std::size_t budget = kDefaultExpandBudget) {
  auto degrees = expand(f, budget).degrees();
  if (degrees.size() > 1)
    throw NotSemanticallyHomogeneous("polynomial has monomials of degrees " + std::to_string(degrees.front()) +
                                     " and " + std::to_string(degrees.back()));
  if (degrees.empty() || degrees.front() == 0)
    throw ParamOutOfRange("pipeline needs a nonconstant polynomial");
  const auto d = static_cast<std::uint32_t>(degrees.front());
  CompositeResult<K> res{f, 0, 0, std::nullopt, std::nullopt, "pipeline"};
  auto bb = depth_reduce_bb(binarize(f), mpq_class(1, 2));
  res.bb_k = bb.k;
  res.size_after_bb = bb.formula.metrics().size;
  auto parts = homogenize(bb.formula, d);
  if (!parts.components[d]) throw std::logic_error("pipeline: degree component vanished structurally");
  auto h = binarize(*parts.components[d]);
  auto main = depth_reduce_main_auto(h);
  res.delta = main.delta;
  res.phi = main.phi;
  res.formula = collapse(main.formula);
  return res;
}

}  // namespace logdepth
