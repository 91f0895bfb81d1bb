#pragma once

#include "latcount/linalg.hpp"

#include <optional>

namespace latcount {

/// P·A·Q = S with P, Q unimodular and S diagonal with the divisibility
/// chain S_11 | S_22 | ... on its nonnegative diagonal.
struct SmithDecomposition {
  IntMatrix p;
  IntMatrix s;
  IntMatrix q;
  BigInt sigma; // last diagonal entry of S (0 for empty A)
  BigInt delta; // |det S| for square input, product of the nonzero diagonal otherwise
  std::size_t rank = 0;

  [[nodiscard]] std::size_t diag_size() const { return std::min(s.rows(), s.cols()); }
  [[nodiscard]] const BigInt &diag(std::size_t i) const { return s(i, i); }
};

namespace detail {

class SmithReducer {
public:
  explicit SmithReducer(const IntMatrix &a)
      : s_(a), p_(IntMatrix::identity(a.rows())), q_(IntMatrix::identity(a.cols())) {}

  SmithDecomposition run() {
    const std::size_t m = s_.rows(), n = s_.cols();
    std::size_t r = 0;
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
      auto piv = min_nonzero(k);
      if (!piv) break;
      move_pivot(k, piv->first, piv->second);
      while (true) {
        if (!clear_row_and_col(k)) continue;
        // Pivot must divide the rest of the trailing block.
        auto bad = non_divisible(k);
        if (!bad) break;
        add_row(k, *bad, 1); // row k += row bad
      }
      if (s_(k, k) < 0) negate_row(k);
      ++r;
    }
    SmithDecomposition out{std::move(p_), std::move(s_), std::move(q_), 0, 1, r};
    const std::size_t dn = out.diag_size();
    out.sigma = dn ? BigInt(out.s(dn - 1, dn - 1)) : BigInt(0);
    for (std::size_t i = 0; i < dn; ++i)
      if (out.s(i, i) != 0) out.delta *= out.s(i, i);
    if (m == n && r < n) out.delta = 0;
    return out;
  }

private:
  std::optional<std::pair<std::size_t, std::size_t>> min_nonzero(std::size_t k) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    BigInt bestv;
    for (std::size_t i = k; i < s_.rows(); ++i)
      for (std::size_t j = k; j < s_.cols(); ++j) {
        if (s_(i, j) == 0) continue;
        if (!best || abs(s_(i, j)) < bestv) {
          best = {i, j};
          bestv = abs(s_(i, j));
        }
      }
    return best;
  }

  void move_pivot(std::size_t k, std::size_t i, std::size_t j) {
    s_.swap_rows(k, i);
    p_.swap_rows(k, i);
    s_.swap_cols(k, j);
    q_.swap_cols(k, j);
  }

  // Eliminates row k and column k against the pivot. Returns false when a
  // smaller remainder appeared and became the new pivot (caller loops).
  bool clear_row_and_col(std::size_t k) {
    for (std::size_t i = k + 1; i < s_.rows(); ++i) {
      if (s_(i, k) == 0) continue;
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), s_(i, k).get_mpz_t(), s_(k, k).get_mpz_t());
      add_row(i, k, -f);
      if (s_(i, k) != 0) {
        s_.swap_rows(k, i);
        p_.swap_rows(k, i);
        return false;
      }
    }
    for (std::size_t j = k + 1; j < s_.cols(); ++j) {
      if (s_(k, j) == 0) continue;
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), s_(k, j).get_mpz_t(), s_(k, k).get_mpz_t());
      add_col(j, k, -f);
      if (s_(k, j) != 0) {
        s_.swap_cols(k, j);
        q_.swap_cols(k, j);
        return false;
      }
    }
    return true;
  }

  std::optional<std::size_t> non_divisible(std::size_t k) const {
    for (std::size_t i = k + 1; i < s_.rows(); ++i)
      for (std::size_t j = k + 1; j < s_.cols(); ++j)
        if (!mpz_divisible_p(s_(i, j).get_mpz_t(), s_(k, k).get_mpz_t())) return i;
    return std::nullopt;
  }

  // row dst += f · row src (applied to S and P)
  void add_row(std::size_t dst, std::size_t src, const BigInt &f) {
    for (std::size_t j = 0; j < s_.cols(); ++j) s_(dst, j) += f * s_(src, j);
    for (std::size_t j = 0; j < p_.cols(); ++j) p_(dst, j) += f * p_(src, j);
  }

  // col dst += f · col src (applied to S and Q)
  void add_col(std::size_t dst, std::size_t src, const BigInt &f) {
    for (std::size_t i = 0; i < s_.rows(); ++i) s_(i, dst) += f * s_(i, src);
    for (std::size_t i = 0; i < q_.rows(); ++i) q_(i, dst) += f * q_(i, src);
  }

  void negate_row(std::size_t k) {
    for (std::size_t j = 0; j < s_.cols(); ++j) s_(k, j) = -s_(k, j);
    for (std::size_t j = 0; j < p_.cols(); ++j) p_(k, j) = -p_(k, j);
  }

  IntMatrix s_, p_, q_;
};

} // namespace detail

/// Smith normal form by pivoting on the smallest nonzero |entry|.
inline SmithDecomposition snf(const IntMatrix &a) { return detail::SmithReducer(a).run(); }

} // namespace latcount
