#include "fixture.hpp"

namespace kummer {
namespace {

using test::jac;
using test::pd;

TEST(Jacobian, GroupLaw) {
  std::mt19937_64 rng(30);
  const JacobianPoint o = jac().zero();
  for (int k = 0; k < 50; ++k) {
    JacobianPoint p = jac().random_point(rng), q = jac().random_point(rng), r = jac().random_point(rng);
    EXPECT_TRUE(is_equal(add(p, o), p, 1e-12));
    EXPECT_TRUE(is_equal(add(p, neg(p)), o, 1e-12));
    EXPECT_LT(point_distance(add(add(p, q), r), add(p, add(q, r))), 1e-10);
  }
}

TEST(Jacobian, TorsionPoints) {
  auto t2 = torsion_points(pd(), 2);
  auto t3 = torsion_points(pd(), 3);
  EXPECT_EQ(t2.size(), 16u);
  EXPECT_EQ(t3.size(), 81u);
  for (const auto& p : t2) EXPECT_LT(torus_norm(pd(), 2.0 * p.z), 1e-12);
  for (const auto& p : t3) EXPECT_LT(torus_norm(pd(), 3.0 * p.z), 1e-12);
  for (size_t i = 0; i < t3.size(); ++i)
    for (size_t j = i + 1; j < t3.size(); ++j) EXPECT_GT(point_distance(t3[i], t3[j]), 1e-3);
}

TEST(Jacobian, TranslateContainsItsParameter) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    JacobianPoint a = jac().random_point(rng);
    EXPECT_TRUE(jac().on_theta(a, a));
  }
}

TEST(Jacobian, OnThetaSymmetric) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 50; ++k) {
    JacobianPoint a = jac().random_point(rng);
    // half the pairs are incident by construction
    JacobianPoint b = k % 2 ? jac().random_point(rng) : add(a, jac().alpha(jac().random_curve_point(rng)));
    EXPECT_EQ(jac().on_theta(a, b), jac().on_theta(b, a));
    if (k % 2 == 0) EXPECT_TRUE(jac().on_theta(a, b));
  }
}

TEST(Jacobian, ThetaIntersectionReduced) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 20; ++k) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    LengthTwoScheme s = jac().theta_intersection(a, b);
    ASSERT_TRUE(s.reduced);
    for (const auto& w : {s.a, s.b})
      for (const auto& c : {a, b}) EXPECT_LT(jac().theta_residual(w.z - c.z), 1e-7);
    LengthTwoScheme t = jac().theta_intersection(b, a);
    EXPECT_LT(scheme_distance(s, t), 1e-9);
  }
}

TEST(Jacobian, ThetaIntersectionTangent) {
  std::mt19937_64 rng(34);
  for (int k = 0; k < 10; ++k) {
    JacobianPoint a = jac().random_point(rng);
    CurvePoint x = jac().random_curve_point(rng);
    JacobianPoint ax = jac().alpha(x);
    JacobianPoint b = add(a, scale(ax, 2));
    IntersectionDiagnostics d;
    LengthTwoScheme s = jac().theta_intersection(a, b, &d);
    ASSERT_FALSE(s.reduced);
    EXPECT_TRUE(d.double_root);
    EXPECT_LT(point_distance(s.a, add(ax, a)), 1e-6);
    EXPECT_LT(fs_distance(s.v, canonical_map(x)), 1e-6);
  }
}

TEST(Jacobian, CoincidentDivisors) {
  std::mt19937_64 rng(35);
  JacobianPoint a = jac().random_point(rng);
  EXPECT_ERRC(jac().theta_intersection(a, a), Errc::CoincidentDivisors);
}

TEST(Jacobian, TauIsInvolution) {
  std::mt19937_64 rng(36);
  for (int k = 0; k < 50; ++k) {
    LengthTwoScheme z = LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng));
    EXPECT_LT(scheme_distance(jac().tau(jac().tau(z)), z), 1e-7);
  }
  for (int k = 0; k < 20; ++k) {
    LengthTwoScheme z = LengthTwoScheme::nonreduced(jac().random_point(rng), test::random_direction(rng));
    EXPECT_LT(scheme_distance(jac().tau(jac().tau(z)), z), 1e-7);
  }
}

TEST(Jacobian, TauPreservesSum) {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 50; ++k) {
    LengthTwoScheme z = k % 4 == 3
                            ? LengthTwoScheme::nonreduced(jac().random_point(rng), test::random_direction(rng))
                            : LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng));
    EXPECT_LT(point_distance(jac().tau(z).sum(), z.sum()), 1e-7);
  }
}

TEST(Jacobian, SymmetryLemma) {
  std::mt19937_64 rng(38);
  for (int k = 0; k < 30; ++k) {
    bool reduced = k % 3 != 2;
    LengthTwoScheme z = reduced ? LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng))
                                : LengthTwoScheme::nonreduced(jac().random_point(rng), test::random_direction(rng));
    LengthTwoScheme t = jac().tau(z);
    std::vector<JacobianPoint> supp = {t.a};
    if (t.reduced) supp.push_back(t.b);
    for (const auto& c : supp) {
      EXPECT_TRUE(jac().on_theta(c, z.a));
      if (reduced)
        EXPECT_TRUE(jac().on_theta(c, z.b));
      else
        EXPECT_LT(jac().tangency_residual(c, z.a, jac().tangent_vector(z.v)), 1e-6);
    }
  }
}

TEST(Jacobian, NonreducedMapsIntoTranslate) {
  std::mt19937_64 rng(39);
  for (int k = 0; k < 20; ++k) {
    JacobianPoint a = jac().random_point(rng);
    LengthTwoScheme t = jac().tau(LengthTwoScheme::nonreduced(a, test::random_direction(rng)));
    EXPECT_TRUE(jac().on_theta(a, t.a));
    EXPECT_TRUE(jac().on_theta(a, t.b));
  }
}

TEST(Jacobian, TwoTorsionSwitch) {
  std::mt19937_64 rng(40);
  auto t2 = torsion_points(pd(), 2);
  for (int k = 0; k < 16; ++k) {
    const JacobianPoint& eps = t2[k];
    LengthTwoScheme t = jac().tau(LengthTwoScheme::nonreduced(eps, test::random_direction(rng)));
    EXPECT_TRUE(t.reduced);
    EXPECT_TRUE(jac().on_theta(eps, t.a));
    EXPECT_TRUE(jac().on_theta(eps, t.b));
    EXPECT_LT(torus_norm(pd(), t.sum().z), 1e-7);
  }
}

}  // namespace
}  // namespace kummer
