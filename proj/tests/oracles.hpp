#pragma once

// Reference implementations used only by the tests. They share no code with
// the library's expansion or evaluation paths.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "logdepth/formula.hpp"
#include "logdepth/poly.hpp"

namespace oracle {

using logdepth::Formula;
using logdepth::Mode;
using logdepth::NodePtr;
using logdepth::Rationals;
using logdepth::VarId;

using Word = std::vector<VarId>;
using Terms = std::map<Word, mpq_class>;

inline void drop_zeros(Terms& t) {
  for (auto it = t.begin(); it != t.end();) it = (it->second == 0) ? t.erase(it) : std::next(it);
}

/// Sum over parse trees of (coefficient, word), merged gate by gate in plain
/// ordered maps. Throws std::length_error when a gate has more than `cap`
/// distinct monomials.
inline Terms parse_tree_sum(const Formula<Rationals>& f, std::size_t cap = 200000) {
  const bool comm = f.mode == Mode::Commutative;
  std::map<const logdepth::Node<Rationals>*, Terms> memo;
  std::function<const Terms&(const NodePtr<Rationals>&)> rec = [&](const NodePtr<Rationals>& n) -> const Terms& {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Terms out;
    if (n->is_one()) {
      out[Word{}] = 1;
    } else if (n->is_var()) {
      out[Word{n->var_id()}] = 1;
    } else if (n->is_sum()) {
      for (const auto& e : n->edges())
        for (const auto& [w, c] : rec(e.child)) out[w] += c * e.weight;
    } else {
      out[Word{}] = 1;
      for (const auto& e : n->edges()) {
        const Terms& part = rec(e.child);
        Terms next;
        for (const auto& [w1, c1] : out)
          for (const auto& [w2, c2] : part) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            if (comm) std::sort(w.begin(), w.end());
            next[w] += c1 * c2 * e.weight;
            if (next.size() > cap) throw std::length_error("oracle cap");
          }
        out = std::move(next);
      }
    }
    drop_zeros(out);
    if (out.size() > cap) throw std::length_error("oracle cap");
    return memo.emplace(n.get(), std::move(out)).first->second;
  };
  return rec(f.root);
}

inline Terms add(const Terms& a, const Terms& b) {
  Terms out = a;
  for (const auto& [w, c] : b) out[w] += c;
  drop_zeros(out);
  return out;
}

/// Product with the left factor's words first; words re-sorted when commutative.
inline Terms mul(const Terms& a, const Terms& b, Mode mode) {
  Terms out;
  for (const auto& [w1, c1] : a)
    for (const auto& [w2, c2] : b) {
      Word w = w1;
      w.insert(w.end(), w2.begin(), w2.end());
      if (mode == Mode::Commutative) std::sort(w.begin(), w.end());
      out[w] += c1 * c2;
    }
  drop_zeros(out);
  return out;
}

inline Terms constant(const mpq_class& c) {
  Terms t;
  if (c != 0) t[Word{}] = c;
  return t;
}

inline Terms from_table(const logdepth::PolyTable<Rationals>& p) {
  Terms out;
  for (const auto& [m, c] : p.sorted_terms()) out[m] = c;
  return out;
}

/// Square matrix over Q.
struct QMat {
  std::size_t n = 1;
  std::vector<mpq_class> a;
  static QMat scalar(std::size_t n, const mpq_class& c) {
    QMat m{n, std::vector<mpq_class>(n * n)};
    for (std::size_t i = 0; i < n; ++i) m.a[i * n + i] = c;
    return m;
  }
  QMat operator+(const QMat& o) const {
    QMat r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  QMat operator*(const QMat& o) const {
    QMat r{n, std::vector<mpq_class>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i * n + k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) r.a[i * n + j] += a[i * n + k] * o.a[k * n + j];
      }
    return r;
  }
  QMat scaled(const mpq_class& c) const {
    QMat r = *this;
    for (auto& x : r.a) x *= c;
    return r;
  }
  bool operator==(const QMat& o) const { return a == o.a; }
};

using Point = std::map<VarId, QMat>;

/// Value of the formula tree at the point, by direct recursion.
inline QMat eval(const Formula<Rationals>& f, const Point& at, std::size_t n) {
  std::map<const logdepth::Node<Rationals>*, QMat> memo;
  std::function<QMat(const NodePtr<Rationals>&)> rec = [&](const NodePtr<Rationals>& x) -> QMat {
    if (x->is_one()) return QMat::scalar(n, 1);
    if (x->is_var()) return at.at(x->var_id());
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    QMat acc = QMat::scalar(n, x->is_sum() ? 0 : 1);
    for (const auto& e : x->edges()) {
      QMat c = rec(e.child).scaled(e.weight);
      acc = x->is_sum() ? acc + c : acc * c;
    }
    memo.emplace(x.get(), acc);
    return acc;
  };
  return rec(f.root);
}

/// Random point with small integer entries for every variable of both
/// formulas; 1 x 1 in commutative mode.
inline Point random_point(const std::vector<VarId>& vars, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-50, 50);
  Point p;
  for (VarId v : vars) {
    QMat m{n, std::vector<mpq_class>(n * n)};
    for (auto& x : m.a) x = dist(rng);
    p.emplace(v, std::move(m));
  }
  return p;
}

/// Agreement at `points` random points (matrices of size syn_degree + 1 in
/// non-commutative mode). A false result is conclusive; true is probabilistic.
inline bool agree_at_points(const Formula<Rationals>& a, const Formula<Rationals>& b, unsigned points,
                            std::uint64_t seed) {
  auto va = logdepth::variables(a), vb = logdepth::variables(b);
  va.insert(va.end(), vb.begin(), vb.end());
  std::sort(va.begin(), va.end());
  va.erase(std::unique(va.begin(), va.end()), va.end());
  std::size_t n = 1;
  if (a.mode == Mode::NonCommutative)
    n = std::max(a.metrics().syn_degree, b.metrics().syn_degree) + 1;
  std::mt19937_64 rng(seed);
  for (unsigned t = 0; t < points; ++t) {
    auto p = random_point(va, n, rng);
    if (!(eval(a, p, n) == eval(b, p, n))) return false;
  }
  return true;
}

}  // namespace oracle
