#pragma once

// Exact scalar arithmetic. BigInt and Rational are GMP's C++ wrappers;
// every Rational produced here is canonical (lowest terms, positive
// denominator).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latcount {

using BigInt = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<BigInt>;
using RationalVector = std::vector<Rational>;

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct RankError : Error {
  using Error::Error;
};

/// An invariant that only a bug can violate (e.g. a non-integral count).
struct InternalError : Error {
  using Error::Error;
};

inline Rational make_rational(const BigInt &num, const BigInt &den) {
  if (den == 0) throw Error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline BigInt floor_of(const Rational &q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_of(const Rational &q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rational &q) { return q.get_den() == 1; }

/// Nonnegative residue of a modulo m (m > 0).
inline BigInt mod_floor(const BigInt &a, const BigInt &m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline BigInt gcd_of(const BigInt &a, const BigInt &b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt lcm_of(const BigInt &a, const BigInt &b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt pow_of(const BigInt &base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Rational pow_of(const Rational &base, unsigned long exp) {
  Rational r(pow_of(base.get_num(), exp), pow_of(base.get_den(), exp));
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Converts to int64_t, throwing when the value does not fit.
inline std::int64_t to_int64(const BigInt &v) {
  if (!mpz_fits_slong_p(v.get_mpz_t()))
    throw Error("integer " + v.get_str() + " exceeds the 64-bit working range");
  return static_cast<std::int64_t>(v.get_si());
}

inline std::string to_string(const BigInt &v) { return v.get_str(); }

/// "p/q" for non-integers, plain "p" otherwise.
inline std::string to_string(const Rational &q) { return q.get_str(); }

/// Parses "p", "-p" or "p/q". Decimal points and exponents are rejected.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false))
    throw Error("not an exact integer or fraction: '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n[0] == '+') n.erase(0, 1);
  BigInt p(n, 10), q(std::string(den), 10);
  if (q == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  return make_rational(p, q);
}

inline BigInt parse_integer(std::string_view text) {
  Rational q = parse_rational(text);
  if (!is_integer(q)) throw Error("expected an integer, got '" + std::string(text) + "'");
  return q.get_num();
}

inline RationalVector to_rational(const IntVector &v) {
  return RationalVector(v.begin(), v.end());
}

} // namespace latcount
