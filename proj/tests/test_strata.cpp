#include <gtest/gtest.h>

#include "nodehilb/hilb/strata.hpp"
#include "nodehilb/scroll/scroll.hpp"

using namespace nodehilb;

namespace {

bool all_ok(const CheckReport& r) {
  for (const auto& c : r)
    if (c.status != Status::verified) {
      ADD_FAILURE() << c.id << " " << to_string(c.status) << " " << c.detail.dump();
      return false;
    }
  return true;
}

}  // namespace

TEST(Fibre, PrintedExamples) {
  auto f = punctual_fiber(3, 0, 0);
  EXPECT_EQ(f.components, (std::vector<int>{1, 2}));
  EXPECT_FALSE(f.point);
  auto g = punctual_fiber(3, 1, 1);
  EXPECT_TRUE(g.components.empty());
  ASSERT_TRUE(g.point);
  EXPECT_EQ(*g.point, 2);
  EXPECT_EQ(punctual_fiber(4, 1, 1).components, (std::vector<int>{2}));
  EXPECT_THROW(punctual_fiber(3, 2, 1), InvalidStratum);
  EXPECT_THROW(punctual_fiber(3, -1, 0), InvalidStratum);
}

TEST(Fibre, CombinatorialComponents) {
  auto comps = locus_components(type_constraints(3, 0, 0));
  std::vector<std::string> names;
  for (const auto& p : comps) names.push_back(describe(p).name);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"C_1", "C_2"}));

  auto point = locus_components(type_constraints(3, 1, 1));
  ASSERT_EQ(point.size(), 1u);
  EXPECT_EQ(describe(point[0]).name, "Q_2");
  EXPECT_EQ(describe(point[0]).dimension, 0);
}

TEST(Fibre, RangesUpToSix) {
  for (int m = 1; m <= 6; ++m)
    for (int a = 0; a <= m - 1; ++a)
      for (int b = 0; a + b <= m - 1; ++b) {
        auto r = verify_fiber(m, a, b);
        ASSERT_FALSE(r.empty());
        EXPECT_EQ(r[0].status, Status::verified) << r[0].id << " " << r[0].detail.dump();
        for (const auto& c : r) EXPECT_NE(c.status, Status::failed) << c.id;
      }
}

TEST(Fibre, ScrollEquationsDifferByOneIndex) {
  auto f = punctual_fiber(5, 0, 1);
  ASSERT_EQ(f.corrected_scroll_equations.size(), 3u);
  for (std::size_t j = 0; j + 1 < f.corrected_scroll_equations.size(); ++j) {
    const auto& p = f.corrected_scroll_equations[j];
    const auto& q = f.corrected_scroll_equations[j + 1];
    EXPECT_EQ(q.v_zero.size(), p.v_zero.size() + 1);
    EXPECT_EQ(q.u_zero.size() + 1, p.u_zero.size());
  }
}

TEST(Punctual, Lengths) {
  auto c = punctual_ideal_length(3, 1, {PointKind::principal, 5});
  EXPECT_EQ(c.length, 3);
  EXPECT_EQ(c.cobasis.size(), 3u);
  auto z = punctual_ideal_length(3, 1, {PointKind::zero, 1});
  EXPECT_EQ(z.length, 3);
  EXPECT_EQ(z.generators, (std::vector<std::string>{"x^3", "y"}));
  for (int m = 1; m <= 6; ++m) EXPECT_TRUE(all_ok(verify_punctual_lengths(m))) << m;
  EXPECT_THROW(punctual_ideal_length(3, 0, {PointKind::principal, 1}), InvalidStratum);
  EXPECT_THROW(punctual_ideal_length(3, 1, {PointKind::principal, 0}), ZeroRatio);
  EXPECT_THROW(punctual_ideal_length(3, 3, {PointKind::infinity, 1}), InvalidStratum);
}

TEST(Interpolating, IdentityAndControl) {
  for (int n = 2; n <= 5; ++n)
    for (int j = 1; j < n; ++j) EXPECT_TRUE(all_ok(interpolating_section_check(n, j))) << n << "," << j;
  auto r = interpolating_section_check(2, 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_FALSE(r[1].detail["equal"].get<bool>());
  EXPECT_THROW(interpolating_section_check(3, 3), PreconditionFailed);
}

TEST(DClass, PrintedValues) {
  PicClass d21 = d_class(2, 1);
  EXPECT_EQ(d21[psi_x()], -1);
  EXPECT_EQ(d21[psi_y()], 0);
  EXPECT_EQ(d21[norm_x()], 2);
  EXPECT_EQ(d21[norm_y()], 1);
  EXPECT_EQ(d21.str(), "-psi_x + 2*Nm_x + Nm_y");
  EXPECT_EQ(d_class(3, 2).str(), "-psi_x - psi_y + 2*Nm_x + 2*Nm_y");
  EXPECT_THROW(d_class(3, 0), IndexOutOfRange);
  EXPECT_THROW(d_class(3, 4), IndexOutOfRange);
}

TEST(DClass, BranchSwap) {
  for (int n = 1; n <= 8; ++n) {
    for (int j = 1; j <= n; ++j) {
      // Independent coefficient table for the mirror class.
      int jm = n + 1 - j;
      PicClass s = d_class(n, j).swap_branches();
      EXPECT_EQ(s[psi_x()], -(long long)(n - jm + 1) * (n - jm) / 2);
      EXPECT_EQ(s[psi_y()], -(long long)jm * (jm - 1) / 2);
      EXPECT_EQ(s[norm_x()], n - jm + 1);
      EXPECT_EQ(s[norm_y()], jm);
    }
    EXPECT_TRUE(all_ok(d_class_symmetry(n)));
  }
}

TEST(NodeScroll, Summands) {
  auto s = node_scroll(2, 1, 5);
  EXPECT_EQ(s.lower.str(), "-psi_x + 2*Nm_x + Nm_y");
  EXPECT_EQ(s.upper.str(), "-psi_y + Nm_x + 2*Nm_y");
  EXPECT_EQ(s.k, 3);
  EXPECT_EQ(s.polarization, -PicClass(gamma_class(5)) + PicClass(gamma_class(3)));
  EXPECT_NE(s.section_lower, s.section_upper);
  PicClass c = PicClass(psi_y(), 7) + PicClass(Symbol{SymbolKind::boundary});
  EXPECT_EQ(s.twist(c).section_difference(), s.section_difference());
  EXPECT_THROW(node_scroll(2, 2, 5), IndexOutOfRange);
  EXPECT_THROW(node_scroll(4, 1, 3), MultiplicityOverflow);
  for (int n = 2; n <= 8; ++n)
    for (int j = 1; j < n; ++j) EXPECT_TRUE(all_ok(node_scroll_check(n, j, 12)));
}

TEST(NodeScroll, LocalGlobal) {
  auto r = local_global_consistency(2, 1);
  EXPECT_TRUE(all_ok(r));
  EXPECT_EQ(r[0].detail["difference"], "psi_x - psi_y - Nm_x + Nm_y");
  EXPECT_EQ(r[0].detail["psi_truncated"], "-Nm_x + Nm_y");
  auto r53 = local_global_consistency(5, 3);
  EXPECT_EQ(r53[0].detail["difference"], "2*psi_x - 3*psi_y - Nm_x + Nm_y");
  for (int n = 2; n <= 8; ++n)
    for (int j = 1; j < n; ++j) EXPECT_TRUE(all_ok(local_global_consistency(n, j)));
}

TEST(Polyscroll, Telescoping) {
  auto r = polyscroll({2, 3}, {1, 2}, 7);
  EXPECT_EQ(r.k, 2);
  EXPECT_EQ(r.polarization, -PicClass(gamma_class(7)) + PicClass(gamma_class(2)));
  ASSERT_EQ(r.scrolls.size(), 2u);
  EXPECT_EQ(r.scrolls[1].lower, d_class(3, 2, 2));

  auto single = polyscroll({3}, {1}, 4);
  auto ns = node_scroll(3, 1, 4);
  EXPECT_EQ(single.polarization, ns.polarization);
  EXPECT_EQ(single.scrolls[0].lower.relabel(1, 0), ns.lower);

  EXPECT_THROW(polyscroll({3, 3}, {1, 1}, 5), MultiplicityOverflow);
  EXPECT_THROW(polyscroll({3}, {1, 2}, 5), PreconditionFailed);

  // All compositions with parts >= 2 and total <= m <= 12.
  for (int m = 2; m <= 12; ++m) {
    std::vector<int> parts;
    auto rec = [&](auto&& self, int left) -> void {
      if (!parts.empty()) {
        std::vector<int> js(parts.size(), 1);
        EXPECT_TRUE(all_ok(polyscroll_check(parts, js, m)));
      }
      for (int p = 2; p <= left; ++p) {
        parts.push_back(p);
        self(self, left - p);
        parts.pop_back();
      }
    };
    rec(rec, m);
  }
}

TEST(Restriction, PrintedExamples) {
  auto f = restriction_factors(3, 2, 1);
  auto ctx = f.restriction.context();
  Poly w1 = Poly::variable(ctx, "w1"), w2 = Poly::variable(ctx, "w2"), x = Poly::variable(ctx, "x1");
  Poly expected = (w1 - w2) * (w1 - x) * (w2 - x);
  EXPECT_TRUE(f.restriction == expected || f.restriction == -expected) << f.restriction.str();
  EXPECT_EQ(f.w_diagonals, 1);

  auto g = restriction_factors(2, 2, 1);
  auto c2 = g.restriction.context();
  Poly d = Poly::variable(c2, "w1") - Poly::variable(c2, "w2");
  EXPECT_TRUE(g.restriction == d || g.restriction == -d);

  auto edge = restriction_factors(3, 3, 3);
  EXPECT_EQ(edge.w_diagonals, 0);
  EXPECT_THROW(restriction_factors(3, 4, 1), IndexOutOfRange);
}

TEST(Restriction, NeverZeroUpToFive) {
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= m; ++n)
      for (int j = 1; j <= m; ++j) {
        auto r = restriction_factorization(m, n, j);
        ASSERT_EQ(r.size(), 1u);
        EXPECT_EQ(r[0].status, Status::verified) << r[0].id;
        EXPECT_TRUE(r[0].detail["w_diagonals"]["match"].get<bool>()) << r[0].id;
      }
}
