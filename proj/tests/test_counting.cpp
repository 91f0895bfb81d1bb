#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace latcount;
using namespace latcount::testing;

namespace {

RationalVector rv(std::initializer_list<Rational> xs) { return RationalVector(xs); }

CanonicalSystem box(std::size_t d, std::int64_t side) {
  IntMatrix a(2 * d, d);
  RationalVector b(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = 1;
    b[i] = side;
    a(d + i, i) = -1;
    b[d + i] = 0;
  }
  return CanonicalSystem(a, b);
}

CanonicalSystem simplex(std::size_t d, const Rational &scale) {
  IntMatrix a(d + 1, d);
  RationalVector b(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = -1;
    a(d, i) = 1;
  }
  b[d] = scale;
  return CanonicalSystem(a, b);
}

} // namespace

TEST(Count, Examples) {
  CanonicalSystem tri(IntMatrix{{-1, 0}, {0, -1}, {1, 1}}, rv({0, 0, 2}));
  EXPECT_EQ(count(tri).value, 6);
  EXPECT_EQ(brute_force_count(tri), 6);
  EXPECT_EQ(count(box(3, 3)).value, 64);
  EXPECT_EQ(count(box(2, 1)).value, 4);
}

TEST(Count, EmptyPolytope) {
  CanonicalSystem empty(IntMatrix{{1}, {-1}}, rv({-1, 0}));
  EXPECT_EQ(count(empty).value, 0);
  EXPECT_EQ(brute_force_count(empty), 0);
  // nonempty but latticeless
  CanonicalSystem gap(IntMatrix{{1}, {-1}}, rv({Rational(2, 3), Rational(-1, 3)}));
  EXPECT_EQ(count(gap).value, 0);
}

TEST(Count, Diagnostics) {
  CanonicalSystem sys(IntMatrix{{2, 3}, {-3, 1}, {1, -4}, {-1, -1}}, rv({Rational(25, 2), Rational(7, 3), Rational(9, 4), 3}));
  auto r = count(sys);
  EXPECT_EQ(r.value, brute_force_count(sys));
  EXPECT_EQ(r.diag.num_vertices, 3u);
  EXPECT_EQ(r.diag.delta, max_subdeterminant(sys.a(), 2));
  EXPECT_EQ(r.diag.sigmas.size(), 3u);
  EXPECT_GT(r.diag.chi, 0);
}

TEST(Count, MatchesBruteForceRandom) {
  Rng rng(1234);
  int done = 0;
  while (done < 150) {
    const auto d = static_cast<std::size_t>(uniform(rng, 1, 4));
    const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
    auto sys = random_bounded_system(rng, d, m);
    if (!sys) continue;
    ++done;
    ASSERT_EQ(count(*sys).value, brute_force_count(*sys)) << to_string(sys->a());
  }
}

TEST(Count, SparseHigherDimensional) {
  Rng rng(77);
  int done = 0;
  while (done < 40) {
    const auto d = static_cast<std::size_t>(uniform(rng, 5, 6));
    // a box with a couple of sparse cuts
    IntMatrix a(2 * d + 2, d);
    RationalVector b(2 * d + 2);
    for (std::size_t i = 0; i < d; ++i) {
      a(i, i) = 1;
      b[i] = uniform(rng, 1, 3);
      a(d + i, i) = -1;
      b[d + i] = 0;
    }
    for (std::size_t r = 2 * d; r < 2 * d + 2; ++r) {
      for (int k = 0; k < 3; ++k) a(r, static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(d) - 1))) = uniform(rng, -2, 2);
      b[r] = make_rational(uniform(rng, 0, 12), uniform(rng, 1, 3));
    }
    CanonicalSystem sys(a, b);
    ++done;
    ASSERT_EQ(count(sys).value, brute_force_count(sys)) << to_string(a);
  }
}

TEST(Count, RowPermutationInvariance) {
  Rng rng(5);
  int done = 0;
  while (done < 40) {
    auto sys = random_bounded_system(rng, 3, 2);
    if (!sys) continue;
    ++done;
    std::vector<std::size_t> perm(sys->num_rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RationalVector b;
    for (auto i : perm) b.push_back(sys->b()[i]);
    CanonicalSystem permuted(sys->a().select_rows(perm), b);
    EXPECT_EQ(count(permuted).value, count(*sys).value);
  }
}

TEST(Count, UnimodularChangeOfVariables) {
  Rng rng(6);
  int done = 0;
  while (done < 40) {
    auto sys = random_bounded_system(rng, 3, 2);
    if (!sys) continue;
    // random unimodular Q as a product of elementary column operations
    IntMatrix q = IntMatrix::identity(3);
    for (int k = 0; k < 4; ++k) {
      auto i = static_cast<std::size_t>(uniform(rng, 0, 2));
      auto j = static_cast<std::size_t>(uniform(rng, 0, 2));
      if (i == j) continue;
      std::int64_t f = uniform(rng, -2, 2);
      for (std::size_t r = 0; r < 3; ++r) q(r, j) += f * q(r, i);
    }
    ASSERT_EQ(abs(det(q)), 1);
    CanonicalSystem moved(sys->a() * q, sys->b());
    if (max_abs_entry(moved.a()) > 40) continue;
    ++done;
    EXPECT_EQ(count(moved).value, count(*sys).value);
    EXPECT_EQ(count(moved).value, brute_force_count(moved));
  }
}

TEST(Count, IntegerTranslation) {
  Rng rng(7);
  int done = 0;
  while (done < 40) {
    auto sys = random_bounded_system(rng, 3, 2);
    if (!sys) continue;
    ++done;
    IntVector z{uniform(rng, -9, 9), uniform(rng, -9, 9), uniform(rng, -9, 9)};
    IntVector az = sys->a() * z;
    RationalVector b = sys->b();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += az[i];
    EXPECT_EQ(count(sys->with_rhs(b)).value, count(*sys).value);
  }
}

TEST(Count, NoPerturbRequiresSimple) {
  CanonicalSystem sq(IntMatrix{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}}, rv({1, 1, 0, 0, 2}));
  CountOptions opts;
  opts.perturb = false;
  EXPECT_THROW(count(sq, opts), NotSimpleError);
  EXPECT_EQ(count(box(2, 2), opts).value, 9);
  EXPECT_EQ(count(sq).value, 4);
}

TEST(Count, SeedDoesNotChangeValue) {
  CanonicalSystem tri(IntMatrix{{-1, 0}, {0, -1}, {1, 1}}, rv({0, 0, 7}));
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    CountOptions opts;
    opts.seed = seed;
    EXPECT_EQ(count(tri, opts).value, 36);
  }
}

TEST(Unbounded, Examples) {
  EXPECT_TRUE(count(CanonicalSystem(IntMatrix{{-1}}, rv({0}))).infinite());
  auto empty = count(CanonicalSystem(IntMatrix{{1}, {-1}}, rv({-1, -2})));
  EXPECT_FALSE(empty.infinite());
  EXPECT_EQ(empty.value, 0);
  auto parity = count_polyhedron(IntMatrix{{2, -2}, {-2, 2}}, rv({1, -1}));
  EXPECT_FALSE(parity.infinite());
  EXPECT_EQ(parity.value, 0);
  EXPECT_TRUE(count_polyhedron(IntMatrix{{2, -2}, {-2, 2}}, rv({2, -2})).infinite());
}

TEST(Unbounded, ThinConesAwayFromTheApex) {
  // {x2 >= 0, 3 x2 <= x1 ... } style wedges whose first lattice points lie
  // far from the vertex.
  CanonicalSystem wedge(IntMatrix{{-7, 1}, {7, -1}, {0, -1}}, rv({Rational(-1, 2), Rational(6, 7), 0}));
  // 7x1 - x2 in [1/2, 6/7]: no integer point
  EXPECT_EQ(count(wedge).value, 0);
  EXPECT_FALSE(count(wedge).infinite());
  CanonicalSystem open(IntMatrix{{-7, 1}, {7, -1}, {0, -1}}, rv({Rational(-1, 2), 1, 0}));
  EXPECT_TRUE(count(open).infinite());
}

TEST(Unbounded, RankDeficient) {
  EXPECT_TRUE(count_polyhedron(IntMatrix(2, 2), rv({0, 1})).infinite());
  EXPECT_EQ(count_polyhedron(IntMatrix(2, 2), rv({0, -1})).value, 0);
  EXPECT_THROW(count(CanonicalSystem(IntMatrix{{1, 1}}, rv({0}))), RankError);
}

TEST(StandardForm, MatchesEnumeration) {
  Rng rng(8);
  int done = 0;
  while (done < 80) {
    const auto m = static_cast<std::size_t>(uniform(rng, 1, 2));
    const std::size_t n = m + static_cast<std::size_t>(uniform(rng, 1, 3));
    IntMatrix a = random_matrix(rng, m, n, 0, 5);
    if (rank(a) != m) continue;
    // each column must have a positive entry, or the count is infinite
    bool bounded = true;
    for (std::size_t j = 0; j < n; ++j) {
      bool pos = false;
      for (std::size_t i = 0; i < m; ++i) pos |= a(i, j) > 0;
      bounded &= pos;
    }
    if (!bounded) continue;
    IntVector b(m);
    for (auto &v : b) v = uniform(rng, 0, 12);
    ++done;
    auto r = count(StandardSystem(a, b));
    ASSERT_FALSE(r.infinite());
    EXPECT_EQ(r.value, enumerate_standard(a, b, 12)) << to_string(a);
  }
}

TEST(StandardForm, InfiniteAndInfeasible) {
  EXPECT_TRUE(count(StandardSystem(IntMatrix{{1, -1}}, IntVector{0})).infinite());
  EXPECT_EQ(count(StandardSystem(IntMatrix{{2, 4}}, IntVector{5})).value, 0);
  EXPECT_EQ(count(StandardSystem(IntMatrix{{1}}, IntVector{5})).value, 1);
}

TEST(SubsetSum, CoinDpSmall) {
  for (std::vector<std::int64_t> w : {std::vector<std::int64_t>{1, 2}, {3, 5}, {2, 2, 7}, {4, 6, 9}}) {
    IntMatrix a(1, w.size());
    for (std::size_t j = 0; j < w.size(); ++j) a(0, j) = w[j];
    ConeCache cache;
    CountOptions opts;
    opts.cache = &cache;
    for (std::int64_t w0 = 0; w0 <= 30; ++w0)
      EXPECT_EQ(count(StandardSystem(a, IntVector{w0}), opts).value, coin_count(w, w0));
  }
}

TEST(BruteForce, RefusesLargeBoxes) {
  EXPECT_THROW(brute_force_count(box(3, 99), 1000), BruteForceRefused);
  EXPECT_THROW(brute_force_count(CanonicalSystem(IntMatrix{{-1}}, rv({0}))), UnboundedError);
}

TEST(Ehrhart, Square) {
  auto qp = ehrhart(box(2, 1));
  EXPECT_EQ(qp.period, 1u);
  EXPECT_EQ(qp.coefficient(2, 0), 1);
  EXPECT_EQ(qp.coefficient(1, 0), 2);
  EXPECT_EQ(qp.coefficient(0, 0), 1);
  EXPECT_EQ(eval_quasipoly(qp, 10), 121);
}

TEST(Ehrhart, HalfSegment) {
  CanonicalSystem seg(IntMatrix{{1}, {-1}}, rv({Rational(1, 2), 0}));
  auto qp = ehrhart(seg);
  EXPECT_EQ(qp.period, 2u);
  EXPECT_EQ(qp.coefficient(1, 0), Rational(1, 2));
  EXPECT_EQ(qp.coefficient(1, 1), Rational(1, 2));
  EXPECT_EQ(qp.coefficient(0, 0), 1);
  EXPECT_EQ(qp.coefficient(0, 1), Rational(1, 2));
  EXPECT_EQ(eval_quasipoly(qp, 7), 4);
}

TEST(Ehrhart, Simplex3) {
  auto qp = ehrhart(simplex(3, 1));
  EXPECT_EQ(qp.period, 1u);
  EXPECT_EQ(qp.coefficient(3, 0), Rational(1, 6));
  for (std::int64_t alpha = 1; alpha <= 12; ++alpha) EXPECT_EQ(eval_quasipoly(qp, alpha), binomial(alpha + 3, 3));
}

TEST(Ehrhart, InterpolationSamplesRoundTrip) {
  CanonicalSystem sys(IntMatrix{{2, 3}, {-3, 1}, {1, -4}, {-1, -1}}, rv({Rational(5, 2), Rational(7, 3), Rational(9, 4), 3}));
  auto qp = ehrhart(sys);
  for (std::size_t a0 = 1; a0 <= qp.period; ++a0)
    for (std::size_t j = 0; j <= 2; ++j) {
      BigInt alpha = BigInt(static_cast<unsigned long>(a0 + j * qp.period));
      EXPECT_EQ(eval_quasipoly(qp, alpha), brute_force_count(sys.dilated(alpha)));
    }
}

TEST(Ehrhart, RejectsUnboundedAndEmpty) {
  EXPECT_THROW(ehrhart(CanonicalSystem(IntMatrix{{-1}}, rv({0}))), UnboundedError);
  EXPECT_THROW(ehrhart(CanonicalSystem(IntMatrix{{1}, {-1}}, rv({-1, 0}))), Error);
}
