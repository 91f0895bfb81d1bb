#pragma once

// Counting function of P_y = {x : Ax <= b - B·y} on one chamber: the set of
// vertex bases is frozen at a generic y0, and each query re-evaluates the
// cone sums with u(y) = ⌊(b - B·y)_J⌋, looking the numerator coefficients up
// in the precomputed per-residue tables.

#include "latcount/counting.hpp"

namespace latcount {

/// A query parameter moved a frozen vertex outside P_y.
struct ChamberViolation : Error {
  using Error::Error;
};

/// P_{y0} has a degenerate vertex; y0 is not in a chamber interior.
struct NonGenericParameter : Error {
  using Error::Error;
};

struct StepRecord {
  std::vector<std::size_t> rows;       // basis J
  IntMatrix a_j;
  IntMatrix b_j;                       // rows J of B
  RationalVector rhs_j;                // rows J of b
  std::shared_ptr<const ConeData> cone; // Smith data, β source and ε tables for every residue
  IntVector betas;
};

class StepPolynomial {
public:
  StepPolynomial(IntMatrix a, IntMatrix bparam, RationalVector b, IntVector c, std::vector<StepRecord> records)
      : a_(std::move(a)), bparam_(std::move(bparam)), b_(std::move(b)), c_(std::move(c)),
        records_(std::move(records)) {}

  [[nodiscard]] std::size_t num_params() const { return bparam_.cols(); }
  [[nodiscard]] std::size_t dim() const { return a_.cols(); }
  [[nodiscard]] std::size_t length() const { return records_.size(); }
  /// Polynomial degree in the floor functions.
  [[nodiscard]] std::size_t degree() const { return dim() == 0 ? 0 : dim() - 1; }
  [[nodiscard]] const std::vector<StepRecord> &records() const { return records_; }
  [[nodiscard]] const IntVector &direction() const { return c_; }
  [[nodiscard]] const IntMatrix &a() const { return a_; }
  [[nodiscard]] const IntMatrix &bparam() const { return bparam_; }
  [[nodiscard]] const RationalVector &b() const { return b_; }

  /// b - B·y
  [[nodiscard]] RationalVector rhs_at(const RationalVector &y) const {
    if (y.size() != num_params())
      throw DimensionError("expected " + std::to_string(num_params()) + " parameters, got " +
                           std::to_string(y.size()));
    RationalVector r = b_;
    RationalVector by = mul(bparam_, y);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= by[i];
    return r;
  }

private:
  IntMatrix a_;
  IntMatrix bparam_;
  RationalVector b_;
  IntVector c_;
  std::vector<StepRecord> records_;
};

inline StepPolynomial build_step_polynomial(const IntMatrix &a, const IntMatrix &bparam, const RationalVector &b,
                                            const RationalVector &y0, const CountOptions &opts = {}) {
  if (bparam.rows() != a.rows() || b.size() != a.rows())
    throw DimensionError("A, B and b disagree on the number of rows");
  if (y0.size() != bparam.cols()) throw DimensionError("y0 has wrong length");
  RationalVector rhs0 = b;
  RationalVector by = mul(bparam, y0);
  for (std::size_t i = 0; i < rhs0.size(); ++i) rhs0[i] -= by[i];
  CanonicalSystem at_y0(a, rhs0, {SourceForm::parametric, std::nullopt});
  if (recession_nontrivial(at_y0)) throw UnboundedError("parametric polytope is unbounded");
  auto bases = enumerate_vertex_bases(at_y0);
  if (bases.empty()) throw NonGenericParameter("P_y0 is empty");
  if (!is_simple(a, rhs0, bases))
    throw NonGenericParameter("P_y0 is not simple; choose y0 in the interior of a chamber");

  std::mt19937_64 rng(opts.seed);
  DirectionChoice choice = choose_c(bases, rng);
  ConeCache local;
  ConeCache &cache = opts.cache ? *opts.cache : local;
  std::vector<StepRecord> records;
  for (const auto &vb : bases) {
    StepRecord rec;
    rec.rows = vb.rows;
    rec.a_j = vb.a_j;
    rec.b_j = bparam.select_rows(vb.rows);
    for (auto r : vb.rows) rec.rhs_j.push_back(b[r]);
    rec.cone = cache.get(vb.a_j, choice.c);
    const auto &ctx = rec.cone->ctx;
    for (std::size_t i = 0; i < ctx.dim(); ++i) rec.betas.push_back(-BigInt(ctx.orders[i]) * ctx.ch[i] / ctx.delta);
    records.push_back(std::move(rec));
  }
  return StepPolynomial(a, bparam, b, std::move(choice.c), std::move(records));
}

inline BigInt eval_step_polynomial(const StepPolynomial &sp, const RationalVector &y) {
  RationalVector rhs = sp.rhs_at(y);
  Rational total = 0;
  for (const auto &rec : sp.records()) {
    const auto &ctx = rec.cone->ctx;
    const std::size_t d = rec.rows.size();
    RationalVector rj(d);
    for (std::size_t i = 0; i < d; ++i) rj[i] = rhs[rec.rows[i]];
    RationalVector v = mul(ctx.hcols, rj);
    for (auto &x : v) x /= ctx.delta;
    for (std::size_t i = 0; i < sp.a().rows(); ++i)
      if (dot(sp.a().row(i), v) > rhs[i]) {
        std::string rows;
        for (auto r : rec.rows) rows += (rows.empty() ? "" : ",") + std::to_string(r);
        throw ChamberViolation("vertex of basis {" + rows + "} violates row " + std::to_string(i) +
                               "; parameter is outside the chamber");
      }
    IntVector u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = floor_of(rj[i]);
    total += constant_term(cone_expsum(rec.a_j, u, ctx, rec.cone->dp));
  }
  return detail::checked_count(total);
}

} // namespace latcount
