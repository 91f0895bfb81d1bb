#pragma once

// Generating function of a simplicial cone {x : Bx <= u} specialized at
// x_i = e^{c_i τ}. Lattice points of the cone correspond to slack vectors
// y >= 0 with P·y ≡ P·u (mod S), where P·B·Q = S is the Smith form of B.
// That congruence is a knapsack over the finite group Z^n / S·Z^n, so the
// exponential sum is built by a dynamic program over group elements, and the
// constant Taylor coefficient (the point count contribution) is read off
// with Todd polynomials.

#include "latcount/polyhedron.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>

namespace latcount {

/// Thrown when ⟨c, h_i⟩ = 0 for some cone generator; pick another c.
struct InvalidDirectionError : Error {
  using Error::Error;
};

struct GroupContext {
  SmithDecomposition snf;
  BigInt delta;
  std::vector<std::size_t> nontrivial;      // j with S_jj > 1
  std::vector<std::int64_t> moduli;         // S_jj for j in nontrivial
  std::vector<std::vector<std::int64_t>> generators; // g_i = P_{*i} mod S, nontrivial coords
  std::vector<std::int64_t> orders;         // r_i
  IntMatrix hcols;                          // B* = delta·B⁻¹, columns h_i
  IntVector c;
  std::vector<std::int64_t> ch;             // ⟨c, h_i⟩
  BigInt chi;                               // max |⟨c, h_i⟩|

  [[nodiscard]] std::size_t dim() const { return hcols.rows(); }
  [[nodiscard]] std::size_t group_size() const {
    std::size_t s = 1;
    for (auto m : moduli) s *= static_cast<std::size_t>(m);
    return s;
  }
  [[nodiscard]] const BigInt &sigma() const { return snf.sigma; }

  /// Mixed-radix index of a residue vector over the nontrivial coordinates.
  [[nodiscard]] std::size_t index_of(std::span<const std::int64_t> residues) const {
    std::size_t idx = 0;
    for (std::size_t j = moduli.size(); j-- > 0;)
      idx = idx * static_cast<std::size_t>(moduli[j]) + static_cast<std::size_t>(residues[j]);
    return idx;
  }
  [[nodiscard]] std::vector<std::int64_t> element_of(std::size_t idx) const {
    std::vector<std::int64_t> r(moduli.size());
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      r[j] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(moduli[j]));
      idx /= static_cast<std::size_t>(moduli[j]);
    }
    return r;
  }
  /// Group element P·u mod S for an integer vector u.
  [[nodiscard]] std::size_t residue_index(const IntVector &u) const {
    std::vector<std::int64_t> r(moduli.size());
    for (std::size_t t = 0; t < nontrivial.size(); ++t) {
      BigInt acc = 0;
      auto prow = snf.p.row(nontrivial[t]);
      for (std::size_t k = 0; k < u.size(); ++k) acc += prow[k] * u[k];
      r[t] = to_int64(mod_floor(acc, BigInt(moduli[t])));
    }
    return index_of(r);
  }
};

/// Largest group handled by the table-based dynamic program.
inline constexpr std::size_t kMaxGroupSize = std::size_t{1} << 24;

inline GroupContext build_group_context(const IntMatrix &b, const IntVector &c) {
  if (!b.is_square()) throw DimensionError("cone matrix is not square");
  if (c.size() != b.cols()) throw DimensionError("direction c has wrong length");
  const std::size_t n = b.rows();
  auto inv = try_scaled_inverse(b);
  if (!inv) throw SingularMatrixError("cone matrix is singular");

  GroupContext ctx;
  ctx.snf = snf(b);
  ctx.delta = inv->delta;
  ctx.hcols = std::move(inv->astar);
  ctx.c = c;
  if (ctx.delta > BigInt(static_cast<unsigned long>(kMaxGroupSize)))
    throw Error("cone determinant " + ctx.delta.get_str() + " exceeds the supported group size");

  for (std::size_t j = 0; j < n; ++j)
    if (ctx.snf.diag(j) > 1) {
      ctx.nontrivial.push_back(j);
      ctx.moduli.push_back(to_int64(ctx.snf.diag(j)));
    }

  ctx.generators.resize(n);
  ctx.orders.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto &g = ctx.generators[i];
    g.resize(ctx.nontrivial.size());
    BigInt order = 1;
    for (std::size_t t = 0; t < ctx.nontrivial.size(); ++t) {
      const std::size_t j = ctx.nontrivial[t];
      BigInt res = mod_floor(ctx.snf.p(j, i), ctx.snf.diag(j));
      g[t] = to_int64(res);
      BigInt s = ctx.snf.diag(j);
      order = lcm_of(order, s / gcd_of(s, res));
    }
    ctx.orders[i] = to_int64(order);
  }

  ctx.ch.resize(n);
  ctx.chi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt v = 0;
    for (std::size_t k = 0; k < n; ++k) v += c[k] * ctx.hcols(k, i);
    if (v == 0)
      throw InvalidDirectionError("direction c is orthogonal to generator " + std::to_string(i) +
                                  " of cone " + to_string(b));
    ctx.ch[i] = to_int64(v);
    if (abs(v) > ctx.chi) ctx.chi = abs(v);
    for (std::size_t k = 0; k < n; ++k)
      if (!mpz_divisible_p(BigInt(ctx.orders[i] * ctx.hcols(k, i)).get_mpz_t(), ctx.delta.get_mpz_t()))
        throw InternalError("(r_i/delta)·h_i is not integral");
  }
  // Exponents of the dynamic program stay within n·σ·χ.
  BigInt bound = BigInt(static_cast<unsigned long>(n)) * ctx.snf.sigma * ctx.chi;
  to_int64(bound);
  return ctx;
}

/// numerators[g] is the numerator of Σ_{y >= 0, Σ y_i g_i = g} e^{-⟨c, Σ h_i y_i⟩τ'}
/// over the common denominator ∏ (1 - e^{-r_i⟨c,h_i⟩τ'}), stored as exponent
/// terms sorted by exponent. Coefficients are machine integers when the
/// number of slack tuples ∏ r_i fits, arbitrary precision otherwise.
class GroupDpTable {
public:
  template <class C> using Terms = std::vector<std::pair<std::int64_t, C>>;

  [[nodiscard]] std::size_t size() const { return wide_ ? big_.size() : small_.size(); }
  [[nodiscard]] bool wide() const { return wide_; }

  /// Calls fn(exponent, coefficient) for every term of element g.
  template <class F> void for_each(std::size_t g, F &&fn) const {
    if (wide_) {
      for (const auto &[a, e] : big_.at(g)) fn(a, e);
    } else {
      for (const auto &[a, e] : small_.at(g)) fn(a, BigInt(static_cast<long>(e)));
    }
  }
  [[nodiscard]] std::size_t num_terms(std::size_t g) const { return wide_ ? big_.at(g).size() : small_.at(g).size(); }

  static GroupDpTable make(std::vector<Terms<std::int64_t>> t) {
    GroupDpTable r;
    r.small_ = std::move(t);
    return r;
  }
  static GroupDpTable make(std::vector<Terms<BigInt>> t) {
    GroupDpTable r;
    r.wide_ = true;
    r.big_ = std::move(t);
    return r;
  }

private:
  bool wide_ = false;
  std::vector<Terms<std::int64_t>> small_;
  std::vector<Terms<BigInt>> big_;
};

namespace detail {

// out = x^{s1}·p + q - x^{s2}·q on sorted term lists, zero terms dropped.
template <class C>
void merge_step(const GroupDpTable::Terms<C> &p, std::int64_t s1, const GroupDpTable::Terms<C> &q, std::int64_t s2,
                GroupDpTable::Terms<C> &out) {
  out.clear();
  std::size_t i = 0, j = 0, l = 0;
  const std::size_t np = p.size(), nq = q.size();
  constexpr auto kEnd = std::numeric_limits<std::int64_t>::max();
  while (i < np || j < nq || l < nq) {
    const std::int64_t ep = i < np ? p[i].first + s1 : kEnd;
    const std::int64_t eq = j < nq ? q[j].first : kEnd;
    const std::int64_t er = l < nq ? q[l].first + s2 : kEnd;
    const std::int64_t e = std::min({ep, eq, er});
    C v(0);
    if (ep == e) v += p[i++].second;
    if (eq == e) v += q[j++].second;
    if (er == e) v -= q[l++].second;
    if (v != 0) out.emplace_back(e, std::move(v));
  }
}

// Stage k replaces N(g) by Σ_{i<r_k} x^{i·s}·N(g - i·g_k), s = ⟨c, h_k⟩. The
// sum runs over a whole cycle of g ↦ g + g_k, so along a cycle
// N'(g + g_k) = x^s·N'(g) + (1 - x^{r_k·s})·N(g + g_k): one element per cycle
// is summed directly and the rest follow from their predecessor.
template <class C> std::vector<GroupDpTable::Terms<C>> run_group_dp(const GroupContext &ctx) {
  const std::size_t size = ctx.group_size();
  const std::size_t n = ctx.dim();
  const std::size_t k = ctx.moduli.size();
  using Terms = GroupDpTable::Terms<C>;

  auto plus_table = [&](std::size_t i) {
    std::vector<std::size_t> plus(size);
    for (std::size_t idx = 0; idx < size; ++idx) {
      auto e = ctx.element_of(idx);
      for (std::size_t t = 0; t < k; ++t) {
        e[t] += ctx.generators[i][t];
        if (e[t] >= ctx.moduli[t]) e[t] -= ctx.moduli[t];
      }
      plus[idx] = ctx.index_of(e);
    }
    return plus;
  };
  auto by_exponent = [](const auto &x, const auto &y) { return x.first < y.first; };

  std::vector<Terms> prev(size), cur(size);
  if (n == 0) {
    prev[0].emplace_back(0, C(1));
    return prev;
  }
  // Stage 1: the least s >= 0 with s·g_1 = g, found by walking multiples.
  {
    std::vector<std::int64_t> e(k, 0);
    for (std::int64_t s = 0; s < ctx.orders[0]; ++s) {
      prev[ctx.index_of(e)].emplace_back(s * ctx.ch[0], C(1));
      for (std::size_t t = 0; t < k; ++t) {
        e[t] += ctx.generators[0][t];
        if (e[t] >= ctx.moduli[t]) e[t] -= ctx.moduli[t];
      }
    }
  }
  std::vector<char> done;
  std::map<std::int64_t, C> acc;
  for (std::size_t stage = 1; stage < n; ++stage) {
    const auto plus = plus_table(stage);
    const std::int64_t step = ctx.ch[stage];
    const std::int64_t r = ctx.orders[stage];
    done.assign(size, 0);
    for (std::size_t start = 0; start < size; ++start) {
      if (done[start]) continue;
      // Direct sum at the cycle start: walk backwards g, g - g_k, ...; the
      // cycle has exactly r elements, so walking forwards r - 1 steps from
      // g reaches g - g_k, and g - i·g_k is g + (r - i)·g_k.
      std::vector<std::size_t> cycle{start};
      for (std::size_t g = plus[start]; g != start; g = plus[g]) cycle.push_back(g);
      if (static_cast<std::int64_t>(cycle.size()) != r) throw InternalError("generator order mismatch in group DP");
      acc.clear();
      for (std::int64_t i = 0; i < r; ++i) {
        const std::size_t src = cycle[static_cast<std::size_t>((r - i) % r)];
        for (const auto &[a, eps] : prev[src]) acc[a + i * step] += eps;
      }
      Terms &first = cur[start];
      first.clear();
      for (auto &[a, eps] : acc)
        if (eps != 0) first.emplace_back(a, std::move(eps));
      done[start] = 1;
      for (std::size_t t = 1; t < cycle.size(); ++t) {
        merge_step<C>(cur[cycle[t - 1]], step, prev[cycle[t]], r * step, cur[cycle[t]]);
        done[cycle[t]] = 1;
      }
    }
    std::swap(prev, cur);
  }
  for (auto &terms : prev) std::sort(terms.begin(), terms.end(), by_exponent);
  return prev;
}

} // namespace detail

inline GroupDpTable group_dp(const GroupContext &ctx) {
  // Each coefficient counts slack tuples with y_i < r_i, so ∏ r_i bounds it.
  BigInt tuples = 1;
  for (auto r : ctx.orders) tuples *= r;
  if (tuples < BigInt(std::numeric_limits<std::int64_t>::max()))
    return GroupDpTable::make(detail::run_group_dp<std::int64_t>(ctx));
  return GroupDpTable::make(detail::run_group_dp<BigInt>(ctx));
}

/// Σ_a ε_a·e^{α_a τ} / ∏ (1 - e^{β_i τ}).
struct ExpSum {
  std::map<BigInt, BigInt> terms; // α -> ε (> 0)
  IntVector betas;
  Rational shift; // ⟨c, B⁻¹u⟩, exponent of the cone apex
};

/// Exponential sum of {x : Bx <= u} for integer u, from the DP table.
inline ExpSum cone_expsum(const IntMatrix &b, const IntVector &u, const GroupContext &ctx,
                          const GroupDpTable &dp) {
  const std::size_t n = b.rows();
  if (u.size() != n) throw DimensionError("cone right-hand side has wrong length");
  ExpSum es;
  BigInt base = 0; // ⟨c, B* u⟩
  for (std::size_t i = 0; i < n; ++i) {
    BigInt hu = 0;
    for (std::size_t k = 0; k < n; ++k) hu += ctx.hcols(i, k) * u[k];
    base += ctx.c[i] * hu;
  }
  es.shift = make_rational(base, ctx.delta);
  dp.for_each(ctx.residue_index(u), [&](std::int64_t a, const BigInt &eps) {
    BigInt num = base - a;
    if (!mpz_divisible_p(num.get_mpz_t(), ctx.delta.get_mpz_t()))
      throw InternalError("non-integral exponent in cone generating function");
    BigInt alpha;
    mpz_divexact(alpha.get_mpz_t(), num.get_mpz_t(), ctx.delta.get_mpz_t());
    es.terms.emplace(std::move(alpha), eps);
  });
  es.betas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt v = BigInt(ctx.orders[i]) * ctx.ch[i];
    if (!mpz_divisible_p(v.get_mpz_t(), ctx.delta.get_mpz_t()))
      throw InternalError("non-integral denominator exponent");
    es.betas[i] = -v / ctx.delta;
  }
  return es;
}

/// Bernoulli numbers B_0..B_n (B_1 = -1/2), from Σ_{k<=m} C(m+1,k) B_k = 0.
inline std::vector<Rational> bernoulli_numbers(std::size_t n) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard lock(mu);
  while (cache.size() <= n) {
    const std::size_t m = cache.size();
    Rational s = 0;
    for (std::size_t k = 0; k < m; ++k) s += Rational(binomial(m + 1, k)) * cache[k];
    cache.push_back(-s / Rational(static_cast<unsigned long>(m + 1)));
  }
  return {cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(n + 1)};
}

/// td_0..td_n of (β_1..β_n): the coefficients of ∏ β_i t / (1 - e^{-β_i t}).
inline std::vector<Rational> todd_values(const IntVector &betas, std::size_t n) {
  auto bern = bernoulli_numbers(n);
  // t/(1 - e^{-t}) = Σ B_k (-t)^k / k!
  std::vector<Rational> unit(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    unit[k] = bern[k] / Rational(factorial(k));
    if (k % 2 == 1) unit[k] = -unit[k];
  }
  std::vector<Rational> acc(n + 1);
  acc[0] = 1;
  for (const auto &beta : betas) {
    if (beta == 0) throw Error("todd_values: zero beta");
    std::vector<Rational> series(n + 1);
    BigInt bp = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      series[k] = unit[k] * bp;
      bp *= beta;
    }
    std::vector<Rational> next(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (acc[i] == 0) continue;
      for (std::size_t j = 0; i + j <= n; ++j) next[i + j] += acc[i] * series[j];
    }
    acc = std::move(next);
  }
  return acc;
}

/// Constant Taylor coefficient at τ = 0 of Σ ε e^{ατ} / ∏ (1 - e^{β_i τ}):
/// Σ ε/(β_1⋯β_n) · Σ_j (-α)^j/j! · td_{n-j}(β).
inline Rational constant_term(const ExpSum &es) {
  if (es.terms.empty()) return 0;
  const std::size_t n = es.betas.size();
  auto td = todd_values(es.betas, n);
  // moments[j] = Σ ε·(-α)^j
  std::vector<BigInt> moments(n + 1);
  for (const auto &[alpha, eps] : es.terms) {
    BigInt p = eps;
    BigInt neg = -alpha;
    for (std::size_t j = 0; j <= n; ++j) {
      moments[j] += p;
      p *= neg;
    }
  }
  BigInt prod = 1;
  for (const auto &b : es.betas) prod *= b;
  Rational s = 0;
  for (std::size_t j = 0; j <= n; ++j) s += Rational(moments[j]) * td[n - j] / Rational(factorial(j));
  return s / Rational(prod);
}

struct DirectionChoice {
  IntVector c;
  bool fallback = false; // the sum-of-rows candidate was rejected
  int attempts = 1;
};

/// Exponent range Σ_i r_i·|⟨c, h_i⟩| of the DP for one cone, where
/// h_i are the columns of B* = δ·B⁻¹ and r_i = δ / gcd(δ, h_i). The DP
/// stores about this many terms, so it is the cost used to rank candidates.
inline BigInt direction_cost(const ScaledInverse &inv, const IntVector &c) {
  BigInt total = 0;
  const std::size_t d = inv.astar.rows();
  for (std::size_t i = 0; i < d; ++i) {
    BigInt g = inv.delta, v = 0;
    for (std::size_t k = 0; k < d; ++k) {
      g = gcd_of(g, inv.astar(k, i));
      v += c[k] * inv.astar(k, i);
    }
    if (v == 0) return -1;
    total += inv.delta / g * abs(v);
  }
  return total;
}

/// Picks c with ⟨c, h⟩ != 0 for every generator column h of every cone.
/// Candidates are the row sums of the cone matrices; the valid one with the
/// smallest total exponent range wins. If none is valid, random positive
/// combinations of the rows of the first cone are tried.
inline DirectionChoice choose_c(const std::vector<IntMatrix> &cone_matrices, std::mt19937_64 &rng,
                                int max_attempts = 64) {
  if (cone_matrices.empty()) throw Error("choose_c: no cones");
  std::vector<ScaledInverse> gens;
  gens.reserve(cone_matrices.size());
  for (const auto &m : cone_matrices) gens.push_back(adjugate_scaled_inverse(m));
  const IntMatrix &first = cone_matrices.front();
  const std::size_t d = first.cols();

  auto cost = [&](const IntVector &c) -> std::optional<BigInt> {
    BigInt total = 0;
    for (const auto &inv : gens) {
      BigInt v = direction_cost(inv, c);
      if (v < 0) return std::nullopt;
      total += v;
    }
    return total;
  };
  auto combine = [&](const IntMatrix &rows, const std::vector<std::int64_t> &w) {
    IntVector c(d);
    for (std::size_t r = 0; r < rows.rows(); ++r)
      for (std::size_t k = 0; k < d; ++k) c[k] += w[r] * rows(r, k);
    return c;
  };

  std::vector<std::int64_t> w(first.rows(), 1);
  std::optional<IntVector> best;
  BigInt best_cost;
  std::set<IntVector> tried;
  int attempts = 0;
  for (const auto &m : cone_matrices) {
    IntVector c = combine(m, w);
    if (!tried.insert(c).second) continue;
    ++attempts;
    if (auto v = cost(c); v && (!best || *v < best_cost)) {
      best = std::move(c);
      best_cost = *v;
    }
  }
  if (best) return {std::move(*best), false, attempts};
  const auto hi = static_cast<std::int64_t>(std::max<std::size_t>(2, d * d));
  std::uniform_int_distribution<std::int64_t> coef(1, hi);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    for (auto &x : w) x = coef(rng);
    IntVector c = combine(first, w);
    if (cost(c)) return {std::move(c), true, attempts + attempt};
  }
  throw InvalidDirectionError("no valid direction c after " + std::to_string(max_attempts) +
                              " random attempts; first cone " + to_string(first));
}

inline DirectionChoice choose_c(const std::vector<VertexBasis> &bases, std::mt19937_64 &rng) {
  std::vector<IntMatrix> mats;
  for (const auto &vb : bases) mats.push_back(vb.a_j);
  return choose_c(mats, rng);
}

/// Group context and DP table for one cone matrix and direction.
struct ConeData {
  GroupContext ctx;
  GroupDpTable dp;
};

/// Memoizes ConeData by (cone matrix, c). The DP table depends only on the
/// matrix and c, never on the right-hand side, so all cones that share a
/// matrix reuse one table.
class ConeCache {
public:
  std::shared_ptr<const ConeData> get(const IntMatrix &b, const IntVector &c) {
    std::string key = to_string(b) + "|";
    for (const auto &v : c) key += v.get_str() + ",";
    {
      std::lock_guard lock(mu_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    auto ctx = build_group_context(b, c);
    auto dp = group_dp(ctx);
    auto data = std::make_shared<const ConeData>(ConeData{std::move(ctx), std::move(dp)});
    std::lock_guard lock(mu_);
    return map_.emplace(std::move(key), std::move(data)).first->second;
  }
  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const ConeData>> map_;
};

} // namespace latcount
