#pragma once

// Polyhedra in canonical form {x : Ax <= b} and standard form
// {x >= 0 : Ax = b}, the reduction between them, the exact perturbation to a
// simple polytope, and the vertex/ray scans used by the counter.

#include "latcount/snf.hpp"

#include <optional>
#include <set>

namespace latcount {

enum class SourceForm { canonical, standard, parametric };

/// x = offset + linear·z, mapping canonical lattice points back to the
/// variables of the originating system.
struct AffineMap {
  IntVector offset;
  IntMatrix linear;

  [[nodiscard]] IntVector apply(const IntVector &z) const {
    IntVector x = linear * z;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset[i];
    return x;
  }
};

struct Provenance {
  SourceForm form = SourceForm::canonical;
  std::optional<AffineMap> back_map;
};

/// {x ∈ R^d : Ax <= b} with rank(A) = d >= 1.
class CanonicalSystem {
public:
  CanonicalSystem(IntMatrix a, RationalVector b, Provenance meta = {})
      : a_(std::move(a)), b_(std::move(b)), meta_(std::move(meta)) {
    if (a_.rows() != b_.size())
      throw DimensionError("canonical system: A has " + std::to_string(a_.rows()) + " rows but b has " +
                           std::to_string(b_.size()) + " entries");
    if (a_.cols() == 0) throw DimensionError("canonical system: dimension must be at least 1");
    if (rank(a_) != a_.cols())
      throw RankError("canonical system: rank(A) < " + std::to_string(a_.cols()));
  }

  [[nodiscard]] const IntMatrix &a() const { return a_; }
  [[nodiscard]] const RationalVector &b() const { return b_; }
  [[nodiscard]] const Provenance &meta() const { return meta_; }
  [[nodiscard]] std::size_t dim() const { return a_.cols(); }
  [[nodiscard]] std::size_t num_rows() const { return a_.rows(); }

  [[nodiscard]] bool contains(const RationalVector &x) const {
    for (std::size_t i = 0; i < a_.rows(); ++i)
      if (dot(a_.row(i), x) > b_[i]) return false;
    return true;
  }
  [[nodiscard]] bool contains(const IntVector &x) const {
    for (std::size_t i = 0; i < a_.rows(); ++i)
      if (dot<BigInt>(a_.row(i), x) > b_[i]) return false;
    return true;
  }

  /// Same A, right-hand side replaced.
  [[nodiscard]] CanonicalSystem with_rhs(RationalVector b) const {
    return CanonicalSystem(a_, std::move(b), meta_);
  }
  /// q·P = {x : Ax <= q·b}.
  [[nodiscard]] CanonicalSystem dilated(const BigInt &q) const {
    RationalVector b = b_;
    for (auto &v : b) v *= q;
    return with_rhs(std::move(b));
  }

private:
  IntMatrix a_;
  RationalVector b_;
  Provenance meta_;
};

/// {x ∈ R^n : x >= 0, Ax = b} with rank(A) = m.
class StandardSystem {
public:
  StandardSystem(IntMatrix a, IntVector b, Provenance meta = {SourceForm::standard, std::nullopt})
      : a_(std::move(a)), b_(std::move(b)), meta_(std::move(meta)) {
    if (a_.rows() != b_.size()) throw DimensionError("standard system: A and b disagree on m");
    if (a_.cols() < a_.rows()) throw DimensionError("standard system: n < m");
    if (rank(a_) != a_.rows()) throw RankError("standard system: rank(A) < m");
  }

  [[nodiscard]] const IntMatrix &a() const { return a_; }
  [[nodiscard]] const IntVector &b() const { return b_; }
  [[nodiscard]] const Provenance &meta() const { return meta_; }
  [[nodiscard]] std::size_t num_vars() const { return a_.cols(); }
  [[nodiscard]] std::size_t num_eqs() const { return a_.rows(); }
  [[nodiscard]] std::size_t dim() const { return a_.cols() - a_.rows(); }

private:
  IntMatrix a_;
  IntVector b_;
  Provenance meta_;
};

/// A feasible basis J (|J| = d) of a canonical system and its vertex.
struct VertexBasis {
  std::vector<std::size_t> rows;
  RationalVector vertex;
  IntMatrix a_j;
  IntVector bfloor; // ⌊b_J⌋
};

/// Divides the equality system through by its Smith factors so that the
/// gcd of its maximal minors is 1. Returns nullopt when b is outside the
/// integer image lattice of A (no integer solution at all).
inline std::optional<StandardSystem> normalize_gcd(const StandardSystem &sys) {
  const std::size_t m = sys.num_eqs();
  SmithDecomposition d = snf(sys.a());
  IntVector pb = d.p * sys.b();
  // P·A·Q = S  =>  A = P⁻¹ S Q⁻¹, and S = [D 0] gives D·(Q⁻¹x)_{1..m} = P·b.
  const IntMatrix qinv = adjugate_scaled_inverse(d.q).astar; // |det Q| = 1
  IntMatrix a(m, sys.num_vars());
  IntVector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!mpz_divisible_p(pb[i].get_mpz_t(), d.diag(i).get_mpz_t())) return std::nullopt;
    b[i] = pb[i] / d.diag(i);
    for (std::size_t j = 0; j < sys.num_vars(); ++j) a(i, j) = qinv(i, j);
  }
  return StandardSystem(std::move(a), std::move(b), sys.meta());
}

/// Result of reducing a standard-form system to canonical form. Exactly one
/// of system / fixed_count is set: fixed_count covers the lattice-infeasible
/// case (0) and the zero-dimensional case (0 or 1).
struct CanonicalReduction {
  std::optional<CanonicalSystem> system;
  std::optional<BigInt> fixed_count;
  std::optional<IntVector> point; // the unique solution when d = 0
};

/// {x >= 0 : Ax = b}  ->  {z : -K z <= x0} with x = x0 + K z, where x0 is a
/// particular integer solution and the columns of K span the integer kernel.
inline CanonicalReduction standard_to_canonical(const StandardSystem &sys) {
  const std::size_t m = sys.num_eqs(), n = sys.num_vars();
  SmithDecomposition d = snf(sys.a());
  IntVector pb = d.p * sys.b();
  // x = Q x', x'_{1..m} = D⁻¹ (P b), x'_{m+1..n} = z free.
  IntVector head(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!mpz_divisible_p(pb[i].get_mpz_t(), d.diag(i).get_mpz_t())) return {std::nullopt, BigInt(0), std::nullopt};
    head[i] = pb[i] / d.diag(i);
  }
  IntVector x0(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x0[i] += d.q(i, j) * head[j];
  if (m == n) {
    bool ok = std::all_of(x0.begin(), x0.end(), [](const BigInt &v) { return v >= 0; });
    return {std::nullopt, BigInt(ok ? 1 : 0), x0};
  }
  const std::size_t dd = n - m;
  IntMatrix k(n, dd), a(n, dd);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dd; ++j) {
      k(i, j) = d.q(i, m + j);
      a(i, j) = -k(i, j);
    }
  Provenance meta{SourceForm::standard, AffineMap{x0, k}};
  return {CanonicalSystem(std::move(a), to_rational(x0), std::move(meta)), std::nullopt, std::nullopt};
}

/// Enumerates every feasible basis of the system: each d-subset J of rows
/// with det(A_J) != 0 whose basic solution satisfies all rows. On a simple
/// polytope this yields exactly one basis per vertex.
inline std::vector<VertexBasis> enumerate_vertex_bases(const IntMatrix &a, const RationalVector &b) {
  const std::size_t d = a.cols();
  std::vector<VertexBasis> out;
  for_each_combination(a.rows(), d, [&](const std::vector<std::size_t> &j) {
    IntMatrix aj = a.select_rows(j);
    auto inv = try_scaled_inverse(aj);
    if (!inv) return true;
    RationalVector bj(d);
    for (std::size_t i = 0; i < d; ++i) bj[i] = b[j[i]];
    RationalVector v = mul(inv->astar, bj);
    for (auto &x : v) x /= inv->delta;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (dot(a.row(i), v) > b[i]) return true;
    IntVector fl(d);
    for (std::size_t i = 0; i < d; ++i) fl[i] = floor_of(bj[i]);
    out.push_back({j, std::move(v), std::move(aj), std::move(fl)});
    return true;
  });
  return out;
}

inline std::vector<VertexBasis> enumerate_vertex_bases(const CanonicalSystem &sys) {
  return enumerate_vertex_bases(sys.a(), sys.b());
}

/// Distinct vertices of {x : Ax <= b} (no simplicity assumption).
inline std::vector<RationalVector> distinct_vertices(const CanonicalSystem &sys) {
  std::set<RationalVector> seen;
  std::vector<RationalVector> out;
  for (auto &vb : enumerate_vertex_bases(sys))
    if (seen.insert(vb.vertex).second) out.push_back(std::move(vb.vertex));
  return out;
}

/// Rows tight at x.
inline std::size_t tight_rows(const IntMatrix &a, const RationalVector &b, const RationalVector &x) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (dot(a.row(i), x) == b[i]) ++n;
  return n;
}

/// Simplicity audit: true when no enumerated vertex has more than d tight
/// rows and no two bases share a vertex.
inline bool is_simple(const IntMatrix &a, const RationalVector &b, const std::vector<VertexBasis> &bases) {
  std::set<RationalVector> seen;
  for (const auto &vb : bases) {
    if (tight_rows(a, b, vb.vertex) != a.cols()) return false;
    if (!seen.insert(vb.vertex).second) return false;
  }
  return true;
}

struct PerturbedSystem {
  CanonicalSystem system;
  Rational epsilon;
  RationalVector t;
  int refinements = 0; // times epsilon had to be squared to pass the audit
};

/// The epsilon prescribed for a k×d system:
/// min{β/2, 1/(1 + 2d·d^⌈d/2⌉·γ^d)}, γ = max(‖A‖_max, ‖b‖_∞), β the least
/// gap ⌈b_i⌉ - b_i over non-integer b_i.
inline Rational perturbation_epsilon(const IntMatrix &a, const RationalVector &b) {
  const unsigned long d = a.cols();
  Rational gamma = max_abs_entry(a);
  std::optional<Rational> beta;
  for (const auto &v : b) {
    Rational av = abs(v);
    if (av > gamma) gamma = av;
    if (!is_integer(v)) {
      Rational gap = Rational(ceil_of(v)) - v;
      if (!beta || gap < *beta) beta = gap;
    }
  }
  Rational denom = 1 + 2 * Rational(d) * Rational(pow_of(BigInt(d), (d + 1) / 2)) * pow_of(gamma, d);
  Rational eps = 1 / denom;
  if (beta && *beta / 2 < eps) eps = *beta / 2;
  return eps;
}

/// b -> b + t with t_i = ε^i (i = 1..k). Floors of b are preserved rowwise,
/// so the lattice points do not change; the result is audited for
/// simplicity and ε is squared until the audit passes.
inline PerturbedSystem perturb_to_simple(const CanonicalSystem &sys, int max_refinements = 16) {
  Rational eps = perturbation_epsilon(sys.a(), sys.b());
  for (int attempt = 0;; ++attempt) {
    RationalVector t(sys.num_rows()), b = sys.b();
    Rational power = eps;
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = power;
      b[i] += power;
      power *= eps;
    }
    auto bases = enumerate_vertex_bases(sys.a(), b);
    if (is_simple(sys.a(), b, bases) || attempt >= max_refinements) {
      if (!is_simple(sys.a(), b, bases)) throw InternalError("perturbation failed to produce a simple polytope");
      return {sys.with_rhs(std::move(b)), eps, std::move(t), attempt};
    }
    eps *= eps;
  }
}

/// A nonzero integer vector spanning part of ker(A), if rank(A) < cols.
inline std::optional<IntVector> kernel_vector(const IntMatrix &a) {
  SmithDecomposition d = snf(a);
  if (d.rank == a.cols()) return std::nullopt;
  return d.q.col_vector(d.rank);
}

/// A nonzero y with A y <= 0, or nullopt when the recession cone is {0}.
/// For full column rank the cone is pointed, so it is nontrivial iff it has
/// an extreme ray; every extreme ray is cut out by d-1 independent rows.
inline std::optional<IntVector> recession_nontrivial(const IntMatrix &a) {
  const std::size_t d = a.cols();
  if (auto k = kernel_vector(a)) return k;
  std::optional<IntVector> found;
  std::vector<std::size_t> cols(d);
  for_each_combination(a.rows(), d - 1, [&](const std::vector<std::size_t> &rows) {
    // Generalized cross product of the chosen rows.
    IntVector y(d);
    bool nonzero = false;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<std::size_t> cj;
      for (std::size_t c = 0; c < d; ++c)
        if (c != j) cj.push_back(c);
      y[j] = det(a.select(rows, cj));
      if (j % 2 == 1) y[j] = -y[j];
      if (y[j] != 0) nonzero = true;
    }
    if (!nonzero) return true;
    IntVector ay = a * y;
    bool le = std::all_of(ay.begin(), ay.end(), [](const BigInt &v) { return v <= 0; });
    bool ge = std::all_of(ay.begin(), ay.end(), [](const BigInt &v) { return v >= 0; });
    if (le) {
      found = y;
      return false;
    }
    if (ge) {
      for (auto &v : y) v = -v;
      found = y;
      return false;
    }
    return true;
  });
  return found;
}

inline std::optional<IntVector> recession_nontrivial(const CanonicalSystem &sys) {
  return recession_nontrivial(sys.a());
}

/// Splits off the lineality space of {x : Ax <= b}: a unimodular Q with
/// A·Q = [A' 0] and rank(A') = rank(A). Lattice points map bijectively by
/// x = Q x', and the constraints only involve the first rank(A)
/// coordinates of x'.
struct LinealitySplit {
  IntMatrix reduced; // A' (rows × r)
  IntMatrix q;
  std::size_t rank = 0;
};

inline LinealitySplit split_lineality(const IntMatrix &a) {
  SmithDecomposition d = snf(a);
  IntMatrix aq = a * d.q;
  IntMatrix reduced(a.rows(), d.rank);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < d.rank; ++j) reduced(i, j) = aq(i, j);
  return {std::move(reduced), std::move(d.q), d.rank};
}

} // namespace latcount
