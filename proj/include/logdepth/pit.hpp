#pragma once

// Randomized polynomial identity testing over Z/p. Commutative formulas are
// evaluated at random points; non-commutative ones at tuples of random m x m
// matrices with m = syntactic degree + 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/field.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/rng.hpp"

namespace logdepth {

struct PitConfig {
  std::uint32_t trials = 20;
  std::uint64_t seed = 0;
  std::uint32_t matrix_dim = 0;  // 0: 1 when commutative, syn_degree + 1 otherwise
};

enum class PitVerdict { EqualProbably, Unequal };

inline const char* to_string(PitVerdict v) {
  return v == PitVerdict::EqualProbably ? "equal-probably" : "unequal";
}

/// Square matrix over Z/p, row-major.
struct ModMatrix {
  std::uint32_t dim = 1;
  std::vector<std::uint64_t> a;

  static ModMatrix zero(std::uint32_t m) { return ModMatrix{m, std::vector<std::uint64_t>(std::size_t{m} * m, 0)}; }
  static ModMatrix identity(std::uint32_t m) {
    auto z = zero(m);
    for (std::uint32_t i = 0; i < m; ++i) z.a[std::size_t{i} * m + i] = 1;
    return z;
  }
  bool operator==(const ModMatrix&) const = default;
};

inline void axpy(const PrimeField& f, ModMatrix& y, std::uint64_t c, const ModMatrix& x) {
  for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] = f.add(y.a[i], f.mul(c, x.a[i]));
}

inline ModMatrix matmul(const PrimeField& f, const ModMatrix& x, const ModMatrix& y, std::uint64_t c) {
  const std::uint32_t m = x.dim;
  ModMatrix out = ModMatrix::zero(m);
  const std::uint64_t p = f.modulus();
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t k = 0; k < m; ++k) {
      std::uint64_t xik = f.mul(c, x.a[std::size_t{i} * m + k]);
      if (!xik) continue;
      for (std::uint32_t j = 0; j < m; ++j) {
        auto& o = out.a[std::size_t{i} * m + j];
        o = static_cast<std::uint64_t>((static_cast<unsigned __int128>(xik) * y.a[std::size_t{k} * m + j] + o) % p);
      }
    }
  return out;
}

using Assignment = std::vector<std::pair<VarId, ModMatrix>>;

/// Value of the formula with each variable replaced by its matrix.
inline ModMatrix evaluate(const Formula<PrimeField>& f, const Assignment& at, std::uint32_t dim) {
  std::unordered_map<VarId, const ModMatrix*> lookup;
  for (const auto& [v, m] : at) lookup.emplace(v, &m);
  std::unordered_map<const Node<PrimeField>*, ModMatrix> memo;
  const auto& field = f.field;
  std::function<const ModMatrix&(const NodePtr<PrimeField>&)> rec =
      [&](const NodePtr<PrimeField>& n) -> const ModMatrix& {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    ModMatrix out;
    switch (n->kind()) {
      case GateKind::Var: {
        auto it = lookup.find(n->var_id());
        if (it == lookup.end()) throw std::invalid_argument("no value for " + var::name(n->var_id()));
        out = *it->second;
        break;
      }
      case GateKind::One:
        out = ModMatrix::identity(dim);
        break;
      case GateKind::Sum:
        out = ModMatrix::zero(dim);
        for (const auto& e : n->edges()) axpy(field, out, e.weight, rec(e.child));
        break;
      case GateKind::Prod: {
        out = ModMatrix::identity(dim);
        for (const auto& e : n->edges()) out = matmul(field, out, rec(e.child), e.weight);
        break;
      }
    }
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  return rec(f.root);
}

struct PitWitness {
  std::uint32_t trial = 0;
  std::uint32_t dim = 1;
  Assignment point;
  ModMatrix value_a;
  ModMatrix value_b;
};

struct PitResult {
  PitVerdict verdict = PitVerdict::EqualProbably;
  std::uint32_t trials_run = 0;
  std::uint32_t dim = 1;
  std::uint64_t prime = 0;
  bool prime_floor_ok = true;  // p > 2 * syn_degree * size
  std::optional<PitWitness> witness;
};

/// Re-evaluates both formulas at the witness; true iff they really differ.
inline bool check_witness(const Formula<PrimeField>& a, const Formula<PrimeField>& b, const PitWitness& w) {
  return !(evaluate(a, w.point, w.dim) == evaluate(b, w.point, w.dim));
}

inline PitResult pit_equal(const Formula<PrimeField>& a, const Formula<PrimeField>& b, const PitConfig& cfg = {}) {
  if (a.mode != b.mode) throw ModeMismatch("cannot compare commutative with non-commutative formulas");
  if (!(a.field == b.field)) throw ModeMismatch("formulas live over different primes");
  const auto& field = a.field;
  const std::uint64_t d = std::max(a.metrics().syn_degree, b.metrics().syn_degree);
  std::uint32_t dim = cfg.matrix_dim;
  if (dim == 0) dim = a.commutative() ? 1 : static_cast<std::uint32_t>(d + 1);

  PitResult res;
  res.dim = dim;
  res.prime = field.modulus();
  const std::uint64_t s = std::max(a.metrics().size, b.metrics().size);
  res.prime_floor_ok = static_cast<unsigned __int128>(field.modulus()) >
                       static_cast<unsigned __int128>(2) * d * s;

  auto vars = variables(a);
  {
    auto vb = variables(b);
    vars.insert(vars.end(), vb.begin(), vb.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }
  for (std::uint32_t t = 0; t < cfg.trials; ++t) {
    Rng rng(Rng::derive(cfg.seed, t));
    Assignment point;
    point.reserve(vars.size());
    for (VarId v : vars) {
      ModMatrix m = ModMatrix::zero(dim);
      for (auto& x : m.a) x = rng.below(field.modulus());
      point.emplace_back(v, std::move(m));
    }
    auto va = evaluate(a, point, dim);
    auto vb = evaluate(b, point, dim);
    ++res.trials_run;
    if (!(va == vb)) {
      res.verdict = PitVerdict::Unequal;
      res.witness = PitWitness{t, dim, std::move(point), std::move(va), std::move(vb)};
      return res;
    }
  }
  return res;
}

/// Image of a rational formula in Z/p (shared nodes mapped once).
inline Formula<PrimeField> to_prime_field(const Formula<Rationals>& f, const PrimeField& field) {
  std::unordered_map<const Node<Rationals>*, NodePtr<PrimeField>> memo;
  std::function<NodePtr<PrimeField>(const NodePtr<Rationals>&)> rec =
      [&](const NodePtr<Rationals>& n) -> NodePtr<PrimeField> {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    NodePtr<PrimeField> out;
    if (n->is_var()) {
      out = Node<PrimeField>::var(n->var_id());
    } else if (n->is_one()) {
      out = Node<PrimeField>::one();
    } else {
      std::vector<Edge<PrimeField>> edges;
      for (const auto& e : n->edges()) {
        auto w = field.from_rational(e.weight);
        if (w == 0) throw std::domain_error("edge scalar vanishes modulo " + std::to_string(field.modulus()));
        edges.push_back({w, rec(e.child)});
      }
      out = Node<PrimeField>::gate(n->kind(), std::move(edges));
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return Formula<PrimeField>{field, f.mode, rec(f.root)};
}

inline Formula<PrimeField> to_prime_field(const Formula<PrimeField>& f, const PrimeField&) { return f; }

}  // namespace logdepth
