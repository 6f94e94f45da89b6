#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/field.hpp"
#include "logdepth/formula.hpp"

namespace logdepth {

/// A monomial as a sequence of variable ids: sorted (a sparse exponent
/// vector, repeated ids = multiplicity) in commutative mode, the word itself
/// in non-commutative mode.
using Monomial = std::vector<VarId>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull ^ m.size();
    for (VarId v : m) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline Monomial multiply_monomials(const Monomial& a, const Monomial& b, Mode mode) {
  Monomial out;
  out.reserve(a.size() + b.size());
  if (mode == Mode::NonCommutative) {
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  } else {
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  }
  return out;
}

inline std::string monomial_to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += '*';
    s += var::name(m[i]);
  }
  return s;
}

/// Sparse polynomial: monomial -> nonzero coefficient.
template <FieldDescriptor K>
class PolyTable {
 public:
  using Scalar = typename K::Scalar;
  using Map = std::unordered_map<Monomial, Scalar, MonomialHash>;

  PolyTable(K field, Mode mode) : field_(std::move(field)), mode_(mode) {}

  static PolyTable constant(K field, Mode mode, const Scalar& c) {
    PolyTable p(std::move(field), mode);
    p.add_term({}, c);
    return p;
  }
  static PolyTable variable(K field, Mode mode, VarId v) {
    PolyTable p(std::move(field), mode);
    p.add_term({v}, p.field_.one());
    return p;
  }

  const K& field() const { return field_; }
  Mode mode() const { return mode_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  void add_term(const Monomial& m, const Scalar& c) {
    if (field_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (field_.is_zero(it->second)) terms_.erase(it);
    }
  }
  void add_term(Monomial&& m, const Scalar& c) {
    if (field_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (field_.is_zero(it->second)) terms_.erase(it);
    }
  }

  /// this += c * other
  void add_scaled(const PolyTable& other, const Scalar& c) {
    if (field_.is_zero(c)) return;
    for (const auto& [m, a] : other.terms_) add_term(m, field_.mul(c, a));
  }

  PolyTable scaled(const Scalar& c) const {
    PolyTable out(field_, mode_);
    out.add_scaled(*this, c);
    return out;
  }

  PolyTable operator+(const PolyTable& o) const {
    PolyTable out = *this;
    out.add_scaled(o, field_.one());
    return out;
  }

  /// Ordered product this * other. Throws BudgetExceeded once the result
  /// holds more than `budget` entries.
  PolyTable times(const PolyTable& o, std::size_t budget = SIZE_MAX) const {
    PolyTable out(field_, mode_);
    for (const auto& [ma, ca] : terms_) {
      for (const auto& [mb, cb] : o.terms_) {
        out.add_term(multiply_monomials(ma, mb, mode_), field_.mul(ca, cb));
        if (out.size() > budget)
          throw BudgetExceeded("expansion exceeds budget of " + std::to_string(budget) + " terms");
      }
    }
    return out;
  }

  PolyTable operator*(const PolyTable& o) const { return times(o); }

  bool operator==(const PolyTable& o) const {
    if (mode_ != o.mode_ || !(field_ == o.field_) || terms_.size() != o.terms_.size()) return false;
    for (const auto& [m, c] : terms_) {
      auto it = o.terms_.find(m);
      if (it == o.terms_.end() || !field_.equal(c, it->second)) return false;
    }
    return true;
  }

  /// Terms in a canonical order (by degree, then lexicographic).
  std::vector<std::pair<Monomial, Scalar>> sorted_terms() const {
    std::vector<std::pair<Monomial, Scalar>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      return a.first < b.first;
    });
    return v;
  }

  /// Degrees present, ascending.
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> ds;
    for (const auto& [m, c] : terms_) ds.push_back(m.size());
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.size());
    return d;
  }

  /// Homogeneous component of degree d.
  PolyTable component(std::size_t d) const {
    PolyTable out(field_, mode_);
    for (const auto& [m, c] : terms_)
      if (m.size() == d) out.terms_.emplace(m, c);
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [m, c] : sorted_terms()) {
      s += field_.to_string(c);
      s += ' ';
      s += monomial_to_string(m);
      s += '\n';
    }
    return s;
  }

 private:
  K field_;
  Mode mode_;
  Map terms_;
};

}  // namespace logdepth
