#pragma once

// The nested inner-product polynomial H^(k,r) over variables x_{sigma,tau},
// sigma in [2]^k, tau in [r]^k:
//   H_{u,v} = x_{u,v}                               if |u| = |v| = k
//   H_{u,v} = sum_{a=1..r} H_{u1,va} * H_{u2,va}     otherwise
// and H = H_{empty,empty}. Its canonical formula M alternates r-ary sums and
// binary products from a sum at the top.
//
// Variable encoding (stable): x_{sigma,tau} is the pair variable x_A_B with
//   A = sum_i (sigma_i - 1) * 2^(k-i),   B = sum_i (tau_i - 1) * r^(k-i).

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <optional>
#include <string>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/expand.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/transforms/params.hpp"

namespace logdepth {

using Word = std::vector<std::uint32_t>;  // letters start at 1

inline constexpr std::uint64_t kDefaultHardUniverse = std::uint64_t{1} << 20;

struct HardParams {
  std::uint32_t k = 1;
  std::uint32_t r = 2;

  std::uint64_t degree() const { return std::uint64_t{1} << k; }
  mpz_class universe() const { return pow_mpz(2 * std::uint64_t{r}, k); }
  mpz_class monomial_count() const { return pow_mpz(r, degree() - 1); }
  void check() const {
    if (k < 1) throw ParamOutOfRange("k must be at least 1");
    if (r < 2) throw ParamOutOfRange("r must be at least 2");
  }
};

inline std::string word_to_string(const Word& w) {
  std::string s;
  for (auto c : w) s += (s.empty() ? "" : ".") + std::to_string(c);
  return s.empty() ? "()" : s;
}

inline VarId encode(const HardParams& p, const Word& sigma, const Word& tau) {
  if (sigma.size() != p.k || tau.size() != p.k) throw std::invalid_argument("sigma and tau must have length k");
  std::uint64_t a = 0, b = 0;
  for (std::uint32_t i = 0; i < p.k; ++i) {
    if (sigma[i] < 1 || sigma[i] > 2 || tau[i] < 1 || tau[i] > p.r)
      throw std::invalid_argument("letter out of range");
    a = a * 2 + (sigma[i] - 1);
    b = b * p.r + (tau[i] - 1);
  }
  return var::pair(a, b);
}

inline std::pair<Word, Word> decode(const HardParams& p, VarId v) {
  if (!var::is_pair(v)) throw std::invalid_argument(var::name(v) + " is not a pair variable");
  std::uint64_t a = var::pair_first(v), b = var::pair_second(v);
  Word sigma(p.k), tau(p.k);
  for (std::uint32_t i = p.k; i-- > 0;) {
    sigma[i] = static_cast<std::uint32_t>(a % 2) + 1;
    tau[i] = static_cast<std::uint32_t>(b % p.r) + 1;
    a /= 2;
    b /= p.r;
  }
  if (a != 0 || b != 0) throw std::invalid_argument(var::name(v) + " is outside the universe");
  return {sigma, tau};
}

/// The canonical formula M.
template <FieldDescriptor K = Rationals>
Formula<K> gen_hard(const HardParams& p, const K& field = K{}, Mode mode = Mode::Commutative,
                    std::uint64_t max_universe = kDefaultHardUniverse) {
  p.check();
  if (p.universe() > max_universe || pow_mpz(p.r, p.k) >= mpz_class(static_cast<unsigned long>(var::kPairLimit)))
    throw UniverseTooLarge("(2r)^k = " + p.universe().get_str() + " exceeds the limit " +
                           std::to_string(max_universe));
  Word u, v;
  std::function<NodePtr<K>()> rec = [&]() -> NodePtr<K> {
    if (u.size() == p.k) return Node<K>::var(encode(p, u, v));
    std::vector<Edge<K>> terms;
    for (std::uint32_t a = 1; a <= p.r; ++a) {
      v.push_back(a);
      u.push_back(1);
      auto left = rec();
      u.back() = 2;
      auto right = rec();
      u.pop_back();
      v.pop_back();
      terms.push_back(Edge<K>{field.one(), Node<K>::prod({Edge<K>{field.one(), left}, Edge<K>{field.one(), right}})});
    }
    return Node<K>::sum(std::move(terms));
  };
  return Formula<K>{field, mode, rec()};
}

/// Gate path in M of the node addressed by v1 u1 ... vl ul.
inline GatePath hard_path(const HardParams& p, const Word& u, const Word& v) {
  if (u.size() != v.size() || u.size() > p.k) throw std::invalid_argument("prefix words must share a length <= k");
  GatePath path;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (v[i] < 1 || v[i] > p.r || u[i] < 1 || u[i] > 2) throw std::invalid_argument("letter out of range");
    path.push_back(v[i] - 1);
    path.push_back(u[i] - 1);
  }
  return path;
}

/// The subformula of M computing H_{u,v}.
template <FieldDescriptor K>
Formula<K> subpolynomial(const Formula<K>& m, const HardParams& p, const Word& u, const Word& v) {
  return m.with_root(node_at(m.root, hard_path(p, u, v)));
}

/// Renaming from the variables of H^(k-l,r) to those of H_{u,v} inside H^(k,r).
inline std::unordered_map<VarId, VarId> prefix_renaming(const HardParams& p, const Word& u, const Word& v) {
  if (u.size() != v.size() || u.size() > p.k) throw std::invalid_argument("prefix words must share a length <= k");
  std::unordered_map<VarId, VarId> map;
  const auto rest = static_cast<std::uint32_t>(p.k - u.size());
  if (rest == 0) return map;
  HardParams small{rest, p.r};
  Word s(rest, 1), t(rest, 1);
  for (;;) {
    Word sigma = u, tau = v;
    sigma.insert(sigma.end(), s.begin(), s.end());
    tau.insert(tau.end(), t.begin(), t.end());
    map.emplace(encode(small, s, t), encode(p, sigma, tau));
    // odometer over (s, t)
    std::size_t i = 0;
    for (; i < 2 * rest; ++i) {
      auto& digit = i < rest ? s[rest - 1 - i] : t[2 * rest - 1 - i];
      const std::uint32_t base = i < rest ? 2 : p.r;
      if (digit < base) {
        ++digit;
        break;
      }
      digit = 1;
    }
    if (i == 2 * rest) break;
  }
  return map;
}

inline std::size_t common_prefix(const Word& a, const Word& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i;
}

struct PrefixViolation {
  Monomial monomial;
  VarId first;
  VarId second;
  std::size_t sigma_prefix;  // l
  std::size_t tau_prefix;    // < l + 1
};

struct PrefixCheck {
  bool holds = true;
  std::uint64_t monomials = 0;
  std::uint64_t pairs = 0;
  std::optional<PrefixViolation> violation;
};

/// For every monomial and every pair of its variables x_{s,t}, x_{s',t'}
/// whose sigmas share a longest common prefix of length l < k, the taus
/// must share a prefix of length at least l + 1.
template <FieldDescriptor K>
PrefixCheck check_prefix_property(const Formula<K>& f, const HardParams& p,
                                  std::size_t budget = kDefaultExpandBudget) {
  PrefixCheck res;
  auto poly = expand(f, budget);
  for (const auto& [m, c] : poly.sorted_terms()) {
    ++res.monomials;
    std::vector<std::pair<Word, Word>> dec;
    for (VarId x : m) dec.push_back(decode(p, x));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        std::size_t l = common_prefix(dec[i].first, dec[j].first);
        if (l >= p.k) continue;
        ++res.pairs;
        std::size_t t = common_prefix(dec[i].second, dec[j].second);
        if (t < l + 1) {
          res.holds = false;
          res.violation = PrefixViolation{m, m[i], m[j], l, t};
          return res;
        }
      }
  }
  return res;
}

inline PrefixCheck check_prefix_property(const HardParams& p, std::size_t budget = kDefaultExpandBudget) {
  return check_prefix_property(gen_hard(p), p, budget);
}

struct GateCountViolation {
  GatePath path;
  std::uint64_t monomials;
  std::size_t degree;
  mpz_class bound;
};

struct GateCountCheck {
  bool holds = true;
  std::uint64_t gates = 0;
  std::optional<GateCountViolation> violation;
};

/// Every gate of a monotone formula for H computes at most r^(deg - 1)
/// monomials, deg being the degree of the gate's polynomial. Constant gates
/// are skipped.
template <FieldDescriptor K>
GateCountCheck check_gate_counts(const Formula<K>& f, const HardParams& p,
                                 std::size_t budget = kDefaultExpandBudget) {
  auto h = gen_hard(p, f.field, f.mode);
  if (!(expand(f, budget) == expand(h, budget)))
    throw NotComputingH("formula does not compute H^(" + std::to_string(p.k) + "," + std::to_string(p.r) + ")");
  if (!is_monotone(f, MonotoneCheck::Semantic, budget))
    throw std::invalid_argument("gate count bound applies to monotone formulas only");
  GateCountCheck res;
  for (auto& g : gate_monomial_counts(f, budget)) {
    if (g.degree == 0) continue;
    ++res.gates;
    mpz_class bound = pow_mpz(p.r, g.degree - 1);
    if (mpz_class(static_cast<unsigned long>(g.monomials)) > bound) {
      res.holds = false;
      res.violation = GateCountViolation{std::move(g.path), g.monomials, g.degree, bound};
      return res;
    }
  }
  return res;
}

/// k = log2 d and r = max(2, floor(n^(1/k) / 2)). d must be a power of two
/// with d^2 <= n.
inline HardParams lower_bound_params(std::uint64_t n, std::uint64_t d) {
  if (d < 2 || (d & (d - 1)) != 0) throw ParamOutOfRange("d must be a power of two, at least 2");
  if (static_cast<unsigned __int128>(d) * d > n) throw ParamOutOfRange("d exceeds sqrt(n)");
  const std::uint32_t k = ceil_log2(d);
  mpz_class root;
  mpz_root(root.get_mpz_t(), mpz_class(static_cast<unsigned long>(n)).get_mpz_t(), k);
  std::uint64_t r = std::max<std::uint64_t>(2, root.get_ui() / 2);
  return HardParams{k, static_cast<std::uint32_t>(r)};
}

}  // namespace logdepth
