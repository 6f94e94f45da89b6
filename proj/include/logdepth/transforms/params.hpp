#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "logdepth/errors.hpp"

namespace logdepth {

/// Smallest e with 2^e >= x; 0 for x <= 1.
inline std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t e = 0;
  while (e < 64 && (std::uint64_t{1} << e) < x) ++e;
  return e;
}

inline mpz_class pow_mpz(std::uint64_t base, std::uint64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

struct ReductionParams {
  std::optional<std::uint32_t> delta;  // empty: auto
  mpq_class epsilon = mpq_class(1, 2);
  std::size_t expand_budget = 1'000'000;
};

inline void check_epsilon(const mpq_class& eps) {
  if (sgn(eps) <= 0 || eps > 1) throw ParamOutOfRange("epsilon must lie in (0, 1], got " + eps.get_str());
}

/// Smallest delta >= 1 with d^delta >= s, i.e. ceil(log2 s / log2 d). For d = 1
/// the ratio is unbounded; the sum-depth is used instead (one sum layer).
inline std::uint32_t auto_delta(std::uint64_t s, std::uint64_t d, std::uint32_t sum_depth) {
  if (d <= 1) return std::max<std::uint32_t>(1, sum_depth);
  std::uint32_t delta = 1;
  mpz_class p = d;
  while (p < s) {
    p *= d;
    ++delta;
  }
  return delta;
}

/// Bonet-Buss branch parameter: max(4, 2^ceil(4/eps)).
inline std::uint64_t k_bb(const mpq_class& eps) {
  check_epsilon(eps);
  mpz_class c = 4 * eps.get_den();
  mpz_class q = (c + eps.get_num() - 1) / eps.get_num();  // ceil(4/eps)
  if (q >= 63) throw ParamOutOfRange("epsilon too small: 2^ceil(4/eps) overflows");
  std::uint64_t k = std::uint64_t{1} << q.get_ui();
  return std::max<std::uint64_t>(4, k);
}

}  // namespace logdepth
