#pragma once

// The counting pipeline: recession check -> perturbation to a simple
// polytope -> one simplicial tangent cone per vertex -> group DP per cone
// -> sum of constant Taylor terms. Unbounded inputs are decided (0 or
// infinite) by counting a truncated polytope.

#include "latcount/genfun.hpp"

#include <chrono>
#include <limits>

namespace latcount {

enum class CountKind { finite, infinite };

struct Diagnostics {
  std::size_t num_vertices = 0;
  BigInt delta = 0;     // Δ(A), the maximal d×d minor
  BigInt sigma_max = 0; // max over cones of the last Smith factor
  BigInt chi = 0;       // max over cones of max |⟨c, h_i⟩|
  IntVector c;
  bool c_fallback = false;
  int perturb_refinements = 0;
  std::vector<BigInt> sigmas; // per cone
  std::string route = "bounded";
  double wall_ms = 0;
};

struct CountResult {
  CountKind kind = CountKind::finite;
  BigInt value = 0; // meaningful when kind == finite
  Diagnostics diag;

  [[nodiscard]] bool infinite() const { return kind == CountKind::infinite; }
};

struct CountOptions {
  std::uint64_t seed = 0x1a77ce5eedULL;
  bool perturb = true;          // false: require the input to be simple already
  ConeCache *cache = nullptr;   // optional memo shared across calls
};

/// Raised for operations that need a bounded polytope.
struct UnboundedError : Error {
  using Error::Error;
};

/// Raised when --no-perturb is used on a non-simple polytope.
struct NotSimpleError : Error {
  using Error::Error;
};

namespace detail {

class Stopwatch {
public:
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline BigInt checked_count(const Rational &total) {
  if (!is_integer(total)) throw InternalError("cone contributions sum to non-integer " + to_string(total));
  if (total < 0) throw InternalError("cone contributions sum to negative " + to_string(total));
  return total.get_num();
}

/// Upper bound on every square minor of A (any order). Exact when the
/// number of minors is small, a Hadamard-type product bound otherwise.
inline BigInt all_minors_bound(const IntMatrix &a) {
  const std::size_t kmax = std::min(a.rows(), a.cols());
  BigInt minors = 0;
  for (std::size_t k = 1; k <= kmax; ++k) minors += binomial(a.rows(), k) * binomial(a.cols(), k);
  if (minors <= 20000) {
    BigInt best = 0;
    for (std::size_t k = 1; k <= kmax; ++k) best = std::max<BigInt>(best, max_subdeterminant(a, k));
    return best;
  }
  BigInt bound = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    BigInt norm1 = 0;
    for (const auto &v : a.row(i)) norm1 += abs(v);
    if (norm1 > 1) bound *= norm1;
  }
  return bound;
}

} // namespace detail

/// Count for a bounded canonical system (recession cone already known to be {0}).
inline CountResult count_bounded(const CanonicalSystem &sys, const CountOptions &opts = {}) {
  detail::Stopwatch clock;
  ConeCache local;
  ConeCache &cache = opts.cache ? *opts.cache : local;
  CountResult res;
  res.diag.delta = max_subdeterminant(sys.a(), sys.dim());

  std::vector<VertexBasis> bases;
  if (opts.perturb) {
    PerturbedSystem ps = perturb_to_simple(sys);
    res.diag.perturb_refinements = ps.refinements;
    bases = enumerate_vertex_bases(ps.system);
  } else {
    bases = enumerate_vertex_bases(sys);
    if (!is_simple(sys.a(), sys.b(), bases))
      throw NotSimpleError("polytope is not simple; enable perturbation");
  }
  res.diag.num_vertices = bases.size();
  if (bases.empty()) {
    res.diag.wall_ms = clock.ms();
    return res;
  }
  for (const auto &vb : bases)
    for (std::size_t i = 0; i < vb.rows.size(); ++i)
      if (vb.bfloor[i] != floor_of(sys.b()[vb.rows[i]]))
        throw InternalError("perturbation moved the floor of row " + std::to_string(vb.rows[i]));

  std::mt19937_64 rng(opts.seed);
  DirectionChoice choice = choose_c(bases, rng);
  res.diag.c = choice.c;
  res.diag.c_fallback = choice.fallback;

  Rational total = 0;
  for (const auto &vb : bases) {
    auto cone = cache.get(vb.a_j, choice.c);
    total += constant_term(cone_expsum(vb.a_j, vb.bfloor, cone->ctx, cone->dp));
    res.diag.sigmas.push_back(cone->ctx.sigma());
    res.diag.sigma_max = std::max<BigInt>(res.diag.sigma_max, cone->ctx.sigma());
    res.diag.chi = std::max<BigInt>(res.diag.chi, cone->ctx.chi);
  }
  res.value = detail::checked_count(total);
  res.diag.wall_ms = clock.ms();
  return res;
}

/// 0-versus-infinity decision for a canonical system with a nontrivial
/// recession cone. Takes a vertex v with basis J, c = Σ rows of A_J (so v
/// maximizes cᵀx over P), and keeps only cᵀx >= cᵀv - ‖c‖₁·dΔ - 1: if P has
/// an integer point it has one within ℓ∞-distance dΔ of v, where Δ bounds
/// every square minor of A.
inline CountResult count_or_infinite(const CanonicalSystem &sys, const CountOptions &opts = {}) {
  detail::Stopwatch clock;
  CountResult res;
  res.diag.route = "unbounded";
  std::vector<VertexBasis> vertex;
  for_each_combination(sys.num_rows(), sys.dim(), [&](const std::vector<std::size_t> &j) {
    IntMatrix aj = sys.a().select_rows(j);
    if (det(aj) == 0) return true;
    RationalVector bj(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) bj[i] = sys.b()[j[i]];
    RationalVector v = solve_rational(aj, bj);
    if (!sys.contains(v)) return true;
    vertex.push_back({j, std::move(v), std::move(aj), {}});
    return false;
  });
  if (vertex.empty()) { // pointed and vertex-free: empty
    res.diag.wall_ms = clock.ms();
    return res;
  }
  const VertexBasis &vb = vertex.front();
  const std::size_t d = sys.dim();
  IntVector c(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) c[k] += vb.a_j(r, k);
  BigInt norm1 = 0;
  for (const auto &x : c) norm1 += abs(x);
  const BigInt delta = detail::all_minors_bound(sys.a());
  IntVector neg_c(d);
  for (std::size_t k = 0; k < d; ++k) neg_c[k] = -c[k];
  Rational c0 = -dot(std::span<const BigInt>(c), vb.vertex) + Rational(norm1 * BigInt(static_cast<unsigned long>(d)) * delta + 1);
  RationalVector b = sys.b();
  b.push_back(c0);
  CanonicalSystem truncated(sys.a().with_row(neg_c), std::move(b), sys.meta());
  if (recession_nontrivial(truncated)) throw InternalError("truncated polyhedron is unbounded");
  CountResult inner = count_bounded(truncated, opts);
  res.diag = inner.diag;
  res.diag.route = "unbounded";
  if (inner.value > 0) {
    res.kind = CountKind::infinite;
  } else {
    res.value = 0;
  }
  res.diag.wall_ms = clock.ms();
  return res;
}

/// |P ∩ Z^d| for P = {x : Ax <= b}, or infinite.
inline CountResult count(const CanonicalSystem &sys, const CountOptions &opts = {}) {
  if (recession_nontrivial(sys)) return count_or_infinite(sys, opts);
  return count_bounded(sys, opts);
}

/// Like count, but A may be rank-deficient: lines are split off by a
/// unimodular change of variables, and the count is then 0 or infinite.
inline CountResult count_polyhedron(const IntMatrix &a, const RationalVector &b, const CountOptions &opts = {}) {
  if (a.rows() != b.size()) throw DimensionError("A and b disagree on the number of rows");
  if (a.cols() == 0) throw DimensionError("dimension must be at least 1");
  if (rank(a) == a.cols()) return count(CanonicalSystem(a, b), opts);
  detail::Stopwatch clock;
  LinealitySplit split = split_lineality(a);
  CountResult res;
  res.diag.route = "lineality";
  bool has_point;
  if (split.rank == 0) {
    has_point = std::all_of(b.begin(), b.end(), [](const Rational &v) { return v >= 0; });
  } else {
    CountResult inner = count(CanonicalSystem(split.reduced, b), opts);
    res.diag = inner.diag;
    res.diag.route = "lineality";
    has_point = inner.infinite() || inner.value > 0;
  }
  if (has_point) res.kind = CountKind::infinite;
  res.diag.wall_ms = clock.ms();
  return res;
}

/// |{x ∈ Z^n : x >= 0, Ax = b}|, or infinite.
inline CountResult count(const StandardSystem &sys, const CountOptions &opts = {}) {
  detail::Stopwatch clock;
  CanonicalReduction red = standard_to_canonical(sys);
  if (red.fixed_count) {
    CountResult res;
    res.value = *red.fixed_count;
    res.diag.route = "standard-trivial";
    res.diag.wall_ms = clock.ms();
    return res;
  }
  CountResult res = count(*red.system, opts);
  res.diag.wall_ms = clock.ms();
  return res;
}

struct BruteForceRefused : Error {
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultBruteBox = 50'000'000;

/// Exhaustive scan of the integer points in the bounding box of the
/// vertices. Verification oracle only.
inline BigInt brute_force_count(const CanonicalSystem &sys, std::uint64_t max_box = kDefaultBruteBox) {
  if (recession_nontrivial(sys)) throw UnboundedError("brute force needs a bounded polytope");
  auto verts = distinct_vertices(sys);
  if (verts.empty()) return 0;
  const std::size_t d = sys.dim();
  IntVector lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    Rational mn = verts[0][j], mx = verts[0][j];
    for (const auto &v : verts) {
      if (v[j] < mn) mn = v[j];
      if (v[j] > mx) mx = v[j];
    }
    lo[j] = ceil_of(mn);
    hi[j] = floor_of(mx);
    if (hi[j] < lo[j]) return 0;
  }
  BigInt volume = 1;
  for (std::size_t j = 0; j < d; ++j) volume *= hi[j] - lo[j] + 1;
  if (volume > BigInt(static_cast<unsigned long>(max_box)))
    throw BruteForceRefused("bounding box has " + volume.get_str() + " points, above the cap of " +
                            std::to_string(max_box));

  // Ax <= b  <=>  Ax <= ⌊b⌋ on integer points. Scan in int64.
  const std::size_t k = sys.num_rows();
  std::vector<std::int64_t> a(k * d), rhs(k), x(d), xlo(d), xhi(d), row(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < d; ++j) a[i * d + j] = to_int64(sys.a()(i, j));
    rhs[i] = to_int64(floor_of(sys.b()[i]));
  }
  for (std::size_t j = 0; j < d; ++j) {
    xlo[j] = to_int64(lo[j]);
    xhi[j] = to_int64(hi[j]);
    x[j] = xlo[j];
  }
  for (std::size_t i = 0; i < k; ++i) {
    row[i] = 0;
    for (std::size_t j = 0; j < d; ++j) row[i] += a[i * d + j] * x[j];
  }
  std::uint64_t found = 0;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = row[i] <= rhs[i];
    if (ok) ++found;
    std::size_t j = 0;
    while (j < d && x[j] == xhi[j]) {
      for (std::size_t i = 0; i < k; ++i) row[i] -= a[i * d + j] * (x[j] - xlo[j]);
      x[j] = xlo[j];
      ++j;
    }
    if (j == d) break;
    ++x[j];
    for (std::size_t i = 0; i < k; ++i) row[i] += a[i * d + j];
  }
  return BigInt(static_cast<unsigned long>(found));
}

/// |αP ∩ Z^d| = Σ_i e_i(α mod t)·α^i.
struct QuasiPolynomial {
  std::size_t degree = 0;
  std::size_t period = 1;
  std::vector<std::vector<Rational>> coefficients; // [i][α mod t]

  [[nodiscard]] const Rational &coefficient(std::size_t i, std::size_t residue) const {
    return coefficients.at(i).at(residue);
  }
};

inline BigInt eval_quasipoly(const QuasiPolynomial &qp, const BigInt &alpha) {
  if (alpha < 1) throw Error("dilation must be a positive integer");
  const std::size_t r = mod_floor(alpha, BigInt(static_cast<unsigned long>(qp.period))).get_ui();
  Rational s = 0;
  BigInt p = 1;
  for (std::size_t i = 0; i <= qp.degree; ++i) {
    s += qp.coefficients[i][r] * p;
    p *= alpha;
  }
  if (!is_integer(s)) throw InternalError("quasi-polynomial evaluates to non-integer " + to_string(s));
  return s.get_num();
}

/// Ehrhart quasi-polynomial by interpolation: for each residue α0 in
/// 1..t, counts at α0, α0+t, ..., α0+d·t determine e_0..e_d on that class.
/// t is the lcm of the vertex denominators.
inline QuasiPolynomial ehrhart(const CanonicalSystem &sys, const CountOptions &opts = {}) {
  if (recession_nontrivial(sys)) throw UnboundedError("ehrhart needs a bounded polytope");
  auto verts = distinct_vertices(sys);
  if (verts.empty()) throw Error("ehrhart needs a nonempty polytope");
  BigInt t = 1;
  for (const auto &v : verts)
    for (const auto &x : v) t = lcm_of(t, x.get_den());
  const std::size_t d = sys.dim();
  QuasiPolynomial qp;
  qp.degree = d;
  qp.period = static_cast<std::size_t>(to_int64(t));
  qp.coefficients.assign(d + 1, std::vector<Rational>(qp.period));

  ConeCache local;
  CountOptions inner = opts;
  if (!inner.cache) inner.cache = &local;
  for (std::size_t a0 = 1; a0 <= qp.period; ++a0) {
    IntMatrix vander(d + 1, d + 1);
    RationalVector counts(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
      BigInt q = BigInt(static_cast<unsigned long>(a0)) + BigInt(static_cast<unsigned long>(j)) * t;
      BigInt p = 1;
      for (std::size_t i = 0; i <= d; ++i) {
        vander(j, i) = p;
        p *= q;
      }
      counts[j] = count_bounded(sys.dilated(q), inner).value;
    }
    RationalVector e = solve_rational(vander, counts);
    for (std::size_t i = 0; i <= d; ++i) qp.coefficients[i][a0 % qp.period] = e[i];
  }
  return qp;
}

} // namespace latcount
