#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace latcount;
using namespace latcount::testing;

namespace {

// 0 <= x <= y·1 in dimension d
StepPolynomial dilating_box(std::size_t d) {
  IntMatrix a(2 * d, d), bp(2 * d, 1);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = 1;
    bp(i, 0) = -1;
    a(d + i, i) = -1;
  }
  return build_step_polynomial(a, bp, RationalVector(2 * d), {Rational(7, 2)});
}

// x >= 0, w·x <= y
StepPolynomial knapsack(const std::vector<std::int64_t> &w) {
  const std::size_t n = w.size();
  IntMatrix a(n + 1, n), bp(n + 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = -1;
    a(n, i) = w[i];
  }
  bp(n, 0) = -1;
  return build_step_polynomial(a, bp, RationalVector(n + 1), {Rational(61, 2)});
}

} // namespace

TEST(StepPolynomial, Shape) {
  auto sp = dilating_box(2);
  EXPECT_EQ(sp.num_params(), 1u);
  EXPECT_EQ(sp.length(), 4u);
  EXPECT_EQ(sp.degree(), 1u);
}

TEST(StepPolynomial, DilatingSquare) {
  auto sp = dilating_box(2);
  EXPECT_EQ(eval_step_polynomial(sp, {Rational(5, 2)}), 9);
  for (std::int64_t y = 1; y <= 30; ++y) {
    BigInt want = (y + 1) * (y + 1);
    EXPECT_EQ(eval_step_polynomial(sp, {Rational(y)}), want) << y;
    CanonicalSystem at(sp.a(), sp.rhs_at({Rational(y)}));
    EXPECT_EQ(brute_force_count(at), want);
  }
}

TEST(StepPolynomial, AtBasePointEqualsCount) {
  auto sp = dilating_box(3);
  CanonicalSystem at(sp.a(), sp.rhs_at({Rational(7, 2)}));
  EXPECT_EQ(eval_step_polynomial(sp, {Rational(7, 2)}), count(at).value);
}

TEST(StepPolynomial, OutsideChamber) {
  auto sp = dilating_box(2);
  EXPECT_THROW(eval_step_polynomial(sp, {Rational(-1)}), ChamberViolation);
  EXPECT_THROW(eval_step_polynomial(sp, {Rational(1), Rational(2)}), DimensionError);
}

TEST(StepPolynomial, KnapsackMatchesCoinDp) {
  auto sp = knapsack({1, 2});
  for (std::int64_t y = 0; y <= 30; ++y) {
    // {x >= 0 : x1 + 2x2 <= y} = solutions of x1 + 2x2 + s = y
    EXPECT_EQ(eval_step_polynomial(sp, {Rational(y)}), coin_count({1, 2, 1}, y)) << y;
  }
}

TEST(StepPolynomial, ThreeItemKnapsack) {
  auto sp = knapsack({2, 3, 5});
  for (std::int64_t y = 1; y <= 30; ++y)
    EXPECT_EQ(eval_step_polynomial(sp, {Rational(y)}), coin_count({2, 3, 5, 1}, y)) << y;
}

TEST(StepPolynomial, NoParameters) {
  IntMatrix a{{2, 3}, {-3, 1}, {1, -4}, {-1, -1}};
  RationalVector b{Rational(25, 2), Rational(7, 3), Rational(9, 4), 3};
  auto sp = build_step_polynomial(a, IntMatrix(4, 0), b, {});
  EXPECT_EQ(eval_step_polynomial(sp, {}), count(CanonicalSystem(a, b)).value);
}

TEST(StepPolynomial, TwoParameterRectangle) {
  // 0 <= x1 <= y1, 0 <= x2 <= y2
  IntMatrix a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  IntMatrix bp{{-1, 0}, {0, -1}, {0, 0}, {0, 0}};
  auto sp = build_step_polynomial(a, bp, RationalVector(4), {Rational(3, 2), Rational(5, 2)});
  for (std::int64_t y1 = 1; y1 <= 8; ++y1)
    for (std::int64_t y2 = 1; y2 <= 8; ++y2)
      EXPECT_EQ(eval_step_polynomial(sp, {Rational(y1), Rational(y2)}), (y1 + 1) * (y2 + 1));
}

TEST(StepPolynomial, NonGenericBasePoint) {
  IntMatrix a{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}};
  IntMatrix bp{{-1}, {-1}, {0}, {0}, {-2}};
  EXPECT_THROW(build_step_polynomial(a, bp, RationalVector(5), {Rational(1)}), NonGenericParameter);
}

TEST(StepPolynomial, Unbounded) {
  IntMatrix a{{-1, 0}, {0, -1}};
  EXPECT_THROW(build_step_polynomial(a, IntMatrix{{0}, {0}}, RationalVector(2), {Rational(1)}), UnboundedError);
}
