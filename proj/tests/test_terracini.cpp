#include <algorithm>

#include "fixture.hpp"

namespace kummer {
namespace {

using test::ctx;
using test::jac;
using test::pd;

JetScheme points(const std::vector<JacobianPoint>& pts) {
  JetScheme s;
  for (const auto& p : pts) s.append(JetScheme::point(p.z));
  return s;
}

TEST(Separation, RandomTriples) {
  std::mt19937_64 rng(100);
  for (int k = 0; k < 20; ++k)
    EXPECT_TRUE(separates(ctx(), points({jac().random_point(rng), jac().random_point(rng), jac().random_point(rng)}))
                    .separated);
}

TEST(Separation, RandomQuadruples) {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 20; ++k) {
    std::vector<JacobianPoint> p;
    for (int i = 0; i < 4; ++i) p.push_back(jac().random_point(rng));
    EXPECT_TRUE(separates(ctx(), points(p)).separated);
  }
}

TEST(Separation, QuadrupleOnTranslateFails) {
  std::mt19937_64 rng(102);
  for (int k = 0; k < 20; ++k) {
    TranslateQuadruple q = translate_quadruple(jac(), rng);
    for (const auto& p : q.points) EXPECT_TRUE(jac().on_theta(q.a, p));
    EXPECT_FALSE(separates(ctx(), points(q.points)).separated);
  }
}

TEST(Separation, Monotone) {
  std::mt19937_64 rng(103);
  for (int k = 0; k < 10; ++k) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    Vec2c u = test::random_direction(rng).v.head<2>();
    JetScheme big;
    big.append(JetScheme::tangent(a.z, u));
    big.append(JetScheme::tangent(b.z, u));
    ASSERT_TRUE(separates(ctx(), big).separated);
    JetScheme mid;
    mid.append(JetScheme::tangent(a.z, u));
    mid.append(JetScheme::point(b.z));
    EXPECT_TRUE(separates(ctx(), mid).separated);
    EXPECT_TRUE(separates(ctx(), JetScheme::tangent(a.z, u)).separated);
    EXPECT_TRUE(separates(ctx(), JetScheme::point(a.z)).separated);
  }
}

TEST(Separation, NonSeparatedQuadruplesLieOnOneTranslate) {
  // mixed pool; every failure must sit on the translate by the sum of its points
  std::mt19937_64 rng(104);
  int found = 0;
  for (int k = 0; k < 40; ++k) {
    std::vector<JacobianPoint> p;
    if (k % 2) {
      for (int i = 0; i < 4; ++i) p.push_back(jac().random_point(rng));
    } else {
      p = translate_quadruple(jac(), rng).points;
    }
    std::shuffle(p.begin(), p.end(), rng);
    if (separates(ctx(), points(p)).separated) continue;
    ++found;
    JacobianPoint a = add(add(p[0], p[1]), add(p[2], p[3]));
    for (const auto& x : p) EXPECT_TRUE(jac().on_theta(a, x));
  }
  EXPECT_EQ(found, 20);
}

TEST(Separation, LengthLimit) {
  std::mt19937_64 rng(105);
  std::vector<JacobianPoint> p;
  for (int i = 0; i < kMaxSchemeLength + 1; ++i) p.push_back(jac().random_point(rng));
  EXPECT_ERRC(separates(ctx(), points(p)), Errc::Precondition);
}

TEST(TerraciniTwoPoints, Generic) {
  std::mt19937_64 rng(106);
  for (int k = 0; k < 20; ++k) {
    JacobianPoint b = jac().random_point(rng), c = jac().random_point(rng);
    ProjPoint p = normalize(ctx().phi3(b).v + ctx().phi3(c).v);
    TerraciniVerdict v = terracini_two_points(ctx(), b, c, p);
    EXPECT_TRUE(v.injective) << v.witness;
    EXPECT_GT(v.rank_ratio, 1e-4);
  }
}

TEST(TerraciniTwoPoints, ExcludedPoint) {
  std::mt19937_64 rng(107);
  JacobianPoint b = jac().random_point(rng), c = jac().random_point(rng);
  EXPECT_FALSE(terracini_two_points(ctx(), b, c, ctx().phi3(b)).injective);
  EXPECT_FALSE(terracini_two_points(ctx(), b, c, ctx().phi3(c)).injective);
}

TEST(TerraciniTwoPoints, TangentPlanesMeet) {
  // b = x + e, c = y + e with 2x + 2y + 3e = 0
  std::mt19937_64 rng(108);
  for (int k = 0; k < 20; ++k) {
    Vec2c ax = jac().alpha_unreduced(jac().random_curve_point(rng));
    Vec2c ay = jac().alpha_unreduced(jac().random_curve_point(rng));
    Vec2c e = -2.0 * (ax + ay) / 3.0;
    JacobianPoint b = ctx().point(ax + e), c = ctx().point(ay + e);
    ProjPoint p = normalize(ctx().phi3(b).v + 0.7 * ctx().phi3(c).v);
    TerraciniVerdict v = terracini_two_points(ctx(), b, c, p);
    EXPECT_FALSE(v.injective);
    EXPECT_EQ(v.witness, "tangent planes meet");
  }
}

TEST(TerraciniTwoPoints, OffSecant) {
  std::mt19937_64 rng(109);
  JacobianPoint b = jac().random_point(rng), c = jac().random_point(rng);
  EXPECT_ERRC(terracini_two_points(ctx(), b, c, normalize(test::random_vector(rng, 9))), Errc::PointNotOnSecant);
}

ProjPoint on_tangent(const JacobianPoint& a, const ProjPoint& v) {
  Subspace T = secant_line(ctx(), LengthTwoScheme::nonreduced(a, v));
  return normalize(T.basis.col(0) + 0.6 * T.basis.col(1));
}

TEST(TerraciniDoublePoint, Generic) {
  std::mt19937_64 rng(110);
  for (int k = 0; k < 20; ++k) {
    JacobianPoint a = jac().random_point(rng);
    ProjPoint v = test::random_direction(rng);
    TerraciniVerdict r = terracini_double_point(ctx(), a, v, on_tangent(a, v));
    EXPECT_TRUE(r.injective) << r.witness;
    EXPECT_TRUE(r.sampled);
  }
}

TEST(TerraciniDoublePoint, PointOfTangency) {
  std::mt19937_64 rng(111);
  JacobianPoint a = jac().random_point(rng);
  EXPECT_FALSE(terracini_double_point(ctx(), a, test::random_direction(rng), ctx().phi3(a)).injective);
}

TEST(TerraciniDoublePoint, OsculatingTranslate) {
  // b = x + e with 4x + 3e = 0 in Abel-Jacobi coordinates, tangent along the curve
  std::mt19937_64 rng(112);
  for (int k = 0; k < 20; ++k) {
    CurvePoint x = jac().random_curve_point(rng);
    Vec2c ax = jac().alpha_unreduced(x);
    Vec2c e = -4.0 * ax / 3.0;
    JacobianPoint b = ctx().point(ax + e);
    ProjPoint v = canonical_map(x);
    TerraciniVerdict r = terracini_double_point(ctx(), b, v, on_tangent(b, v));
    EXPECT_FALSE(r.injective);
    EXPECT_FALSE(r.witness.empty());
  }
}

TEST(MeetingSecants, SumZero) {
  std::mt19937_64 rng(113);
  for (int k = 0; k < 10; ++k) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    MeetingReport r = classify_meeting_secants(ctx(), LengthTwoScheme::pair(a, b),
                                               LengthTwoScheme::pair(a, neg(add(a, b))));
    EXPECT_EQ(r.observed, MeetingClass::MeetOffA);
    EXPECT_EQ(r.condition, 2);
  }
}

TEST(MeetingSecants, Generic) {
  std::mt19937_64 rng(114);
  for (int k = 0; k < 10; ++k) {
    LengthTwoScheme z1 = LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng));
    LengthTwoScheme z2 = LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng));
    MeetingReport r = classify_meeting_secants(ctx(), z1, z2);
    EXPECT_EQ(r.observed, MeetingClass::Disjoint);
    EXPECT_EQ(r.condition, 0);
  }
}

TEST(MeetingSecants, CommonTranslate) {
  std::mt19937_64 rng(115);
  for (int k = 0; k < 10; ++k) {
    JacobianPoint e = jac().random_point(rng);
    Vec2c al[4];
    for (auto& x : al) x = jac().alpha_unreduced(jac().random_curve_point(rng));
    LengthTwoScheme z1 = LengthTwoScheme::pair(ctx().point(al[0] + e.z), ctx().point(al[1] + e.z));
    LengthTwoScheme z2 = LengthTwoScheme::pair(ctx().point(al[2] + e.z), ctx().point(al[3] + e.z));
    MeetingReport r = classify_meeting_secants(ctx(), z1, z2);
    EXPECT_EQ(r.observed, MeetingClass::MeetOnA);
    EXPECT_LT(fs_distance(r.point, ctx().phi3(e)), 1e-6);
  }
}

TEST(MeetingSecants, Symmetric) {
  std::mt19937_64 rng(116);
  for (int k = 0; k < 9; ++k) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    LengthTwoScheme z1 = LengthTwoScheme::pair(a, b);
    LengthTwoScheme z2 = k % 3 == 0 ? LengthTwoScheme::pair(a, neg(add(a, b)))
                                    : LengthTwoScheme::pair(jac().random_point(rng), jac().random_point(rng));
    MeetingReport r = classify_meeting_secants_report(ctx(), z1, z2);
    MeetingReport s = classify_meeting_secants_report(ctx(), z2, z1);
    EXPECT_EQ(r.observed, s.observed);
    EXPECT_EQ(r.predicted, s.predicted);
    EXPECT_NEAR(r.angle_sine, s.angle_sine, 1e-9);
  }
}

TEST(Fiber, ThreeSecants) {
  std::mt19937_64 rng(117);
  for (int k = 0; k < 10; ++k) {
    FiberReport f = fiber_over_N_report(ctx(), test::generic_triple(rng));
    EXPECT_EQ(f.count, 3);
    EXPECT_LT(f.worst_on, 1e-6);
    EXPECT_GT(f.min_line_separation, 1e-3);
  }
}

TEST(Fiber, DegenerateTripleRejected) {
  std::mt19937_64 rng(118);
  JacobianPoint a = jac().random_point(rng);
  EXPECT_ERRC(fiber_over_N(ctx(), KummerTriple::triple(a, a, scale(a, -2))), Errc::Precondition);
}

}  // namespace
}  // namespace kummer
