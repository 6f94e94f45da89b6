#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "logdepth/errors.hpp"

namespace logdepth {

/// A field descriptor: a (possibly stateful) value carrying the arithmetic
/// for its Scalar type. Formulas hold one; every scalar op goes through it.
template <class K>
concept FieldDescriptor = requires(const K& k, const typename K::Scalar& a,
                                   const typename K::Scalar& b) {
  typename K::Scalar;
  { K::ordered } -> std::convertible_to<bool>;
  { k.zero() } -> std::same_as<typename K::Scalar>;
  { k.one() } -> std::same_as<typename K::Scalar>;
  { k.add(a, b) } -> std::same_as<typename K::Scalar>;
  { k.sub(a, b) } -> std::same_as<typename K::Scalar>;
  { k.mul(a, b) } -> std::same_as<typename K::Scalar>;
  { k.neg(a) } -> std::same_as<typename K::Scalar>;
  { k.is_zero(a) } -> std::same_as<bool>;
  { k.is_one(a) } -> std::same_as<bool>;
  { k.equal(a, b) } -> std::same_as<bool>;
  { k.to_string(a) } -> std::same_as<std::string>;
  { k.parse(std::string_view{}) } -> std::same_as<std::optional<typename K::Scalar>>;
  { k.name() } -> std::same_as<std::string>;
};

/// Arbitrary-precision rationals (GMP). The default field; ordered.
class Rationals {
 public:
  using Scalar = mpq_class;
  static constexpr bool ordered = true;

  Scalar zero() const { return Scalar(0); }
  Scalar one() const { return Scalar(1); }
  Scalar from_int(std::int64_t v) const {
    Scalar q;
    mpz_set_si(q.get_num_mpz_t(), static_cast<long>(v));
    return q;
  }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar inv(const Scalar& a) const {
    if (sgn(a) == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  bool is_zero(const Scalar& a) const { return sgn(a) == 0; }
  bool is_one(const Scalar& a) const { return a == 1; }
  bool equal(const Scalar& a, const Scalar& b) const { return a == b; }
  bool is_positive(const Scalar& a) const { return sgn(a) > 0; }

  /// Lowest terms, "p/q", or "p" when q = 1.
  std::string to_string(const Scalar& a) const { return a.get_str(); }

  std::optional<Scalar> parse(std::string_view text) const {
    if (text.empty()) return std::nullopt;
    std::size_t slash = std::string_view::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c == '-' && i == 0) continue;
      if (c == '/' && slash == std::string_view::npos && i > 0) {
        slash = i;
        continue;
      }
      if (c < '0' || c > '9') return std::nullopt;
    }
    if (text == "-" || text.back() == '/') return std::nullopt;
    if (slash != std::string_view::npos && (slash == 1 && text[0] == '-'))
      return std::nullopt;
    Scalar q;
    if (q.set_str(std::string(text), 10) != 0) return std::nullopt;
    if (sgn(q.get_den()) == 0) return std::nullopt;
    q.canonicalize();
    return q;
  }

  std::string name() const { return "Q"; }
  bool operator==(const Rationals&) const = default;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Environment variable consulted for the default prime.
inline constexpr const char* kPrimeEnvVar = "LOGDEPTH_PRIME";

/// Integers modulo a prime p < 2^63. Unordered.
class PrimeField {
 public:
  using Scalar = std::uint64_t;
  static constexpr bool ordered = false;

  explicit PrimeField(std::uint64_t p = kMersenne61) : p_(p) {
    if (p >= (std::uint64_t{1} << 63) || !is_prime_u64(p))
      throw std::invalid_argument("field modulus must be a prime below 2^63: " +
                                  std::to_string(p));
  }

  std::uint64_t modulus() const { return p_; }

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(std::int64_t v) const {
    if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
    std::uint64_t m = (static_cast<std::uint64_t>(-(v + 1)) + 1) % p_;
    return m == 0 ? 0 : p_ - m;
  }
  Scalar from_u64(std::uint64_t v) const { return v % p_; }
  Scalar add(Scalar a, Scalar b) const {
    Scalar s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
  Scalar mul(Scalar a, Scalar b) const { return detail::mulmod(a, b, p_); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar inv(Scalar a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return detail::powmod(a, p_ - 2, p_);
  }
  bool is_zero(Scalar a) const { return a == 0; }
  bool is_one(Scalar a) const { return a == 1; }
  bool equal(Scalar a, Scalar b) const { return a == b; }

  /// Image of a rational; throws when p divides the denominator.
  Scalar from_rational(const mpq_class& q) const {
    mpz_class m(static_cast<unsigned long>(p_));
    mpz_class num = q.get_num() % m;
    mpz_class den = q.get_den() % m;
    if (num < 0) num += m;
    if (den == 0)
      throw std::domain_error("denominator vanishes modulo " + std::to_string(p_));
    return mul(num.get_ui(), inv(den.get_ui()));
  }

  std::string to_string(Scalar a) const { return std::to_string(a); }

  /// Accepts integers and fractions; fractions are mapped through the inverse.
  std::optional<Scalar> parse(std::string_view text) const {
    auto q = Rationals{}.parse(text);
    if (!q) return std::nullopt;
    try {
      return from_rational(*q);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  }

  std::string name() const { return "Fp:" + std::to_string(p_); }
  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t p_;
};

/// The prime from $LOGDEPTH_PRIME, or 2^61 - 1.
inline std::uint64_t default_prime() {
  if (const char* env = std::getenv(kPrimeEnvVar); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw std::invalid_argument(std::string(kPrimeEnvVar) + " is not a natural number");
  }
  return kMersenne61;
}

static_assert(FieldDescriptor<Rationals>);
static_assert(FieldDescriptor<PrimeField>);

}  // namespace logdepth
