#pragma once

// Exact dense linear algebra over Z and Q. All elimination is fraction-free
// (Bareiss); rationals appear only in the final back-substitution.

#include "latcount/matrix.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace latcount {

/// Determinant by Bareiss elimination.
inline BigInt det(IntMatrix a) {
  if (!a.is_square()) throw DimensionError("det: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? BigInt(a(n - 1, n - 1)) : BigInt(-a(n - 1, n - 1));
}

/// Rank by fraction-free row echelon reduction.
inline std::size_t rank(IntMatrix a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a(p, c) == 0) ++p;
    if (p == m) continue;
    a.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        BigInt v = a(r, c) * a(i, j) - a(i, c) * a(r, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

namespace detail {

// Fraction-free Gauss-Jordan on [A | R] (A square). On return the left block
// equals D·I and the right block equals D·A⁻¹·R, where D = ±det(A) is
// returned, or nullopt when A is singular.
inline std::optional<BigInt> gauss_jordan_fraction_free(IntMatrix &a, IntMatrix &rhs) {
  const std::size_t n = a.rows();
  BigInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    a.swap_rows(k, p);
    rhs.swap_rows(k, p);
    const BigInt pivot = a(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const BigInt f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        BigInt v = pivot * a(i, j) - f * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        BigInt v = pivot * rhs(i, j) - f * rhs(k, j);
        mpz_divexact(rhs(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = pivot;
  }
  // Every diagonal entry now equals the last pivot.
  return prev;
}

} // namespace detail

struct ScaledInverse {
  IntMatrix astar; // delta · A⁻¹
  BigInt delta;    // |det A|
};

/// Like adjugate_scaled_inverse, but returns nullopt for singular input.
inline std::optional<ScaledInverse> try_scaled_inverse(const IntMatrix &a) {
  if (!a.is_square()) throw DimensionError("adjugate_scaled_inverse: matrix is not square");
  IntMatrix work = a;
  IntMatrix rhs = IntMatrix::identity(a.rows());
  auto dd = detail::gauss_jordan_fraction_free(work, rhs);
  if (!dd) return std::nullopt;
  BigInt d = *dd;
  if (d < 0) {
    for (std::size_t i = 0; i < rhs.rows(); ++i)
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) = -rhs(i, j);
    d = -d;
  }
  return ScaledInverse{std::move(rhs), d};
}

/// A* = |det A|·A⁻¹, which is always an integer matrix.
inline ScaledInverse adjugate_scaled_inverse(const IntMatrix &a) {
  auto r = try_scaled_inverse(a);
  if (!r) throw SingularMatrixError("adjugate_scaled_inverse: matrix is singular");
  return std::move(*r);
}

/// Exact solution of A x = b for square nonsingular A.
inline RationalVector solve_rational(const IntMatrix &a, const RationalVector &b) {
  if (!a.is_square() || a.rows() != b.size()) throw DimensionError("solve_rational: dimension mismatch");
  BigInt common = 1;
  for (const auto &v : b) common = lcm_of(common, v.get_den());
  IntMatrix work = a;
  IntMatrix rhs(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i].get_num() * (common / b[i].get_den());
  auto dd = detail::gauss_jordan_fraction_free(work, rhs);
  if (!dd) throw SingularMatrixError("solve_rational: matrix is singular");
  const BigInt &d = *dd;
  RationalVector x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) x[i] = make_rational(rhs(i, 0), d * common);
  return x;
}

/// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
/// fn returns false to stop early.
inline void for_each_combination(std::size_t n, std::size_t k,
                                 const std::function<bool(const std::vector<std::size_t> &)> &fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Δ_k(A): maximum |det| over all k×k minors, by exhaustive enumeration.
inline BigInt max_subdeterminant(const IntMatrix &a, std::size_t k) {
  if (k > std::min(a.rows(), a.cols()))
    throw DimensionError("max_subdeterminant: order " + std::to_string(k) + " out of range");
  if (k == 0) return 1;
  BigInt best = 0;
  for_each_combination(a.rows(), k, [&](const std::vector<std::size_t> &ri) {
    for_each_combination(a.cols(), k, [&](const std::vector<std::size_t> &ci) {
      BigInt d = abs(det(a.select(ri, ci)));
      if (d > best) best = d;
      return true;
    });
    return true;
  });
  return best;
}

} // namespace latcount
