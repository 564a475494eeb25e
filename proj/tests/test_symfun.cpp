#include <gtest/gtest.h>

#include <random>

#include "nodehilb/sym/symfun.hpp"

using namespace nodehilb;

namespace {

Poly P(const ContextPtr& ctx, const char* s) { return Poly::parse(ctx, s); }

}  // namespace

TEST(ElemSym, Examples) {
  auto c2 = points_context(2);
  auto c3 = points_context(3);
  EXPECT_EQ(elem_sym(Axis::x, 0, c2), P(c2, "1"));
  EXPECT_EQ(elem_sym(Axis::x, 2, c2), P(c2, "x1*x2"));
  EXPECT_EQ(elem_sym(Axis::y, 2, c3), P(c3, "y1*y2 + y1*y3 + y2*y3"));
  EXPECT_THROW(elem_sym(Axis::x, 3, c2), IndexOutOfRange);
  EXPECT_THROW(elem_sym(Axis::y, -1, c2), IndexOutOfRange);
}

TEST(Symmetrize, Examples) {
  auto ctx = points_context(2);
  EXPECT_EQ(symmetrize(P(ctx, "x1")), P(ctx, "(x1 + x2)/2"));
  EXPECT_EQ(symmetrize(P(ctx, "x1*y2")), P(ctx, "(x1*y2 + x2*y1)/2"));
  Poly inv = P(ctx, "x1^2*y2 + x2^2*y1 + t");
  EXPECT_EQ(symmetrize(inv), inv);
  auto foreign = points_context(2, {"u1"});
  EXPECT_THROW(symmetrize(P(foreign, "u1*x1")), ForeignVariables);
}

TEST(Symmetrize, Projection) {
  auto ctx = points_context(3);
  std::mt19937 rng(23);
  for (int i = 0; i < 20; ++i) {
    Poly p = random_point_poly(ctx, rng, 4, 4);
    Poly r = symmetrize(p);
    EXPECT_EQ(symmetrize(r), r);
    EXPECT_TRUE(is_invariant(r));
  }
}

TEST(SigmaExpress, Examples) {
  auto ctx = points_context(2);
  auto sig = sigma_context(2);
  EXPECT_EQ(sigma_express(P(ctx, "x1^2 + x2^2")).expr, P(sig, "sx1^2 - 2*sx2"));
  EXPECT_EQ(sigma_express(P(ctx, "x1*y2 + x2*y1")).expr, P(sig, "sx1*sy1 - 2*t"));
  EXPECT_THROW(sigma_express(P(ctx, "x1")), NotInvariant);
}

TEST(SigmaExpress, RandomInvariantsEvaluateBack) {
  std::mt19937 rng(101);
  for (int m = 1; m <= 4; ++m) {
    auto ctx = points_context(m);
    for (int i = 0; i < 15; ++i) {
      Poly p = symmetrize(random_point_poly(ctx, rng, 3, 6));
      SigmaExpr s = sigma_express(p);
      EXPECT_EQ(evaluate_sigma(s.expr, ctx), p);
      EXPECT_EQ(s.witness, p);
    }
  }
}

TEST(SigmaExpress, ClosureOfProducts) {
  // R(p) R(q) - R(pq) is again invariant and therefore expressible.
  auto ctx = points_context(3);
  std::mt19937 rng(8);
  for (int i = 0; i < 10; ++i) {
    Poly p = random_point_poly(ctx, rng, 2, 3), q = random_point_poly(ctx, rng, 2, 3);
    Poly diff = symmetrize(p) * symmetrize(q) - symmetrize(p * q);
    EXPECT_EQ(evaluate_sigma(sigma_express(diff).expr, ctx), diff);
  }
}

TEST(SigmaExpress, DepthGuard) {
  auto ctx = points_context(2);
  EXPECT_THROW(sigma_express(P(ctx, "x1^3*y2^3 + x2^3*y1^3"), 0), RecursionDepthExceeded);
}

TEST(RecursionConstant, OrbitRatio) {
  // For the averaged products the constant is |orbit(I)| |orbit(J)| / |orbit(I,J)|,
  // which equals m! only in special cases.
  auto c2 = points_context(2);
  auto e = [&](const ContextPtr& c, const char* s) { return P(c, s).leading().exp; };
  EXPECT_EQ(recursion_constant(c2, e(c2, "x1"), e(c2, "y2")), Rational(2));
  auto c3 = points_context(3);
  EXPECT_EQ(recursion_constant(c3, e(c3, "x1"), e(c3, "y2")), frac(3, 2));
  // Check the identity itself at m = 3 using the orbit-ratio constant.
  Poly rxy = symmetrize(P(c3, "x1*y2")), rx = symmetrize(P(c3, "x1")), ry = symmetrize(P(c3, "y2"));
  Poly rest = rxy - frac(3, 2) * rx * ry;
  EXPECT_NO_THROW(rest.exact_div(P(c3, "t")));
  EXPECT_THROW((rxy - Rational(6) * rx * ry).exact_div(P(c3, "t")), NotDivisible);
}

TEST(SigmaRelations, AllInstancesSmallM) {
  for (int m = 1; m <= 6; ++m) {
    auto rep = verify_sigma_relations(m);
    EXPECT_FALSE(rep.empty());
    EXPECT_TRUE(all_verified(rep)) << "m=" << m;
  }
}

TEST(SigmaRelations, ExplicitM2) {
  auto ctx = points_context(2);
  EXPECT_EQ(P(ctx, "y1*y2*(x1 + x2)"), P(ctx, "t*(y1 + y2)"));
  auto one = points_context(1);
  EXPECT_EQ(elem_sym(Axis::y, 1, one) * elem_sym(Axis::x, 1, one), P(one, "t"));
}
