#include "fixture.hpp"

namespace kummer {
namespace {

using test::ctx;
using test::jac;
using test::pd;

TEST(Embedding, KummerMapIsEven) {
  std::mt19937_64 rng(60);
  for (int k = 0; k < 50; ++k) {
    JacobianPoint a = jac().random_point(rng);
    EXPECT_LT(fs_distance(ctx().phi2(a), ctx().phi2(neg(a))), 1e-8);
  }
}

TEST(Embedding, LevelThreeInjective) {
  std::mt19937_64 rng(61);
  int compared = 0;
  for (int k = 0; k < 200; ++k) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    if (point_distance(a, b) <= 1e-2) continue;
    EXPECT_GT(fs_distance(ctx().phi3(a), ctx().phi3(b)), 1e-3);
    ++compared;
  }
  EXPECT_GT(compared, 190);
}

TEST(Embedding, TranslateSpanDimension) {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(ctx().translate_span(jac().random_point(rng)).proj_dim(), 4);
}

TEST(Embedding, TranslateSpanMeetsSurfaceInTranslate) {
  std::mt19937_64 rng(63);
  JacobianPoint a = jac().random_point(rng);
  Subspace S = ctx().translate_span(a);
  for (int k = 0; k < 50; ++k)
    EXPECT_LT(distance_to_subspace(ctx().phi3(add(a, jac().alpha(jac().random_curve_point(rng)))), S), 1e-6);
  int off = 0;
  while (off < 50) {
    JacobianPoint b = jac().random_point(rng);
    if (jac().theta_residual(b.z - a.z) < 1e-2) continue;
    EXPECT_GT(distance_to_subspace(ctx().phi3(b), S), 1e-3);
    ++off;
  }
}

TEST(Embedding, CobleCubic) {
  const auto& C = ctx().coble();
  EXPECT_EQ(C.fit.form.coeffs.size(), 165);
  EXPECT_GT(C.fit.gap, 1e3);
  for (const auto& a : ctx().spread_points(30, 640)) EXPECT_LT(ctx().coble_gradient_residual(ctx().phi3(a)), 1e-6);
}

TEST(Embedding, CobleNotSingularOffSurface) {
  std::mt19937_64 rng(64);
  for (int k = 0; k < 20; ++k)
    EXPECT_GT(ctx().coble_gradient_residual(normalize(test::random_vector(rng, 9))), 1e-3);
}

TEST(Embedding, KummerQuartic) {
  const auto& K = ctx().kummer_quartic();
  EXPECT_EQ(K.fit.form.coeffs.size(), 35);
  EXPECT_GT(K.fit.gap, 1e3);
  const FormCoefficients& Q = K.fit.form;
  for (const auto& a : ctx().spread_points(50, 650))
    EXPECT_LT(std::abs(Q.eval(ctx().phi2(a).v)) / Q.coeffs.norm(), 1e-7);
}

TEST(Embedding, FitsStableUnderResampling) {
  EXPECT_LT(fs_distance(build_coble(ctx(), 4242).fit.form.coeffs, ctx().coble().fit.form.coeffs), 1e-8);
  EXPECT_LT(fs_distance(build_kummer_quartic(ctx(), 4242).fit.form.coeffs, ctx().kummer_quartic().fit.form.coeffs),
            1e-8);
}

TEST(Embedding, CobleInvariantUnderHeisenberg) {
  std::mt19937_64 rng(65);
  const FormCoefficients& F = ctx().coble().fit.form;
  for (const auto& e : {std::array<int, 4>{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}) {
    const MatXc& M = ctx().heisenberg(e[0], e[1], e[2], e[3]).M;
    // F(Mx) is a multiple of F(x) at random x
    cplx ratio = 0.0;
    for (int k = 0; k < 20; ++k) {
      VecXc x = test::random_vector(rng, 9);
      cplx r = F.eval(M * x) / F.eval(x);
      if (k == 0) ratio = r;
      EXPECT_LT(std::abs(r - ratio), 1e-6 * std::abs(ratio));
    }
  }
}

TEST(Embedding, PolarIndeterminateOnSurface) {
  std::mt19937_64 rng(66);
  JacobianPoint a = jac().random_point(rng);
  EXPECT_ERRC(ctx().coble_polar(ctx().phi3(a)), Errc::IndeterminacyPoint);
}

TEST(Embedding, KummerPolarIsTangentHyperplane) {
  std::mt19937_64 rng(67);
  const double h = 1e-6;
  for (int k = 0; k < 10; ++k) {
    Vec2c z = jac().random_point(rng).z;
    VecXc p = level_basis(2, z, pd());
    ProjPoint H = ctx().kummer_polar(ProjPoint(p));
    EXPECT_LT(std::abs((H.v.transpose() * p).value()) / p.norm(), 1e-6);
    for (int d = 0; d < 2; ++d) {
      Vec2c e = Vec2c::Zero();
      e(d) = h;
      VecXc t = (level_basis(2, z + e, pd()) - level_basis(2, z - e, pd())) / (2.0 * h);
      EXPECT_LT(std::abs((H.v.transpose() * t).value()) / t.norm(), 1e-6);
    }
  }
}

TEST(Embedding, PolarScaleInvariant) {
  std::mt19937_64 rng(68);
  VecXc p = test::random_vector(rng, 9);
  EXPECT_LT(fs_distance(ctx().coble_polar(ProjPoint(p)), ctx().coble_polar(ProjPoint(cplx(0.0, 3.0) * p))), 1e-13);
}

class IotaTest : public ::testing::TestWithParam<std::array<int, 4>> {};

TEST_P(IotaTest, SplittingAndHyperellipticProjection) {
  auto e = GetParam();
  JacobianPoint a = ctx().point(torsion_point(pd(), 3, e[0], e[1], e[2], e[3]).z);
  IotaSplitting s = iota_splitting(ctx(), a);
  EXPECT_EQ(s.plus_dim + s.minus_dim, 5);
  EXPECT_EQ(std::min(s.plus_dim, s.minus_dim), 1);
  EXPECT_LT(s.involution_residual, 1e-6);
  EXPECT_EQ(s.P3.proj_dim(), 3);

  std::mt19937_64 rng(69);
  const CurveSpec& C = jac().curve();
  std::vector<VecXc> img;
  for (int k = 0; k < 30; ++k) {
    CurvePoint x = jac().random_curve_point(rng);
    VecXc p = s.project(ctx().phi3(add(a, jac().alpha(x))));
    VecXc q = s.project(ctx().phi3(add(a, jac().alpha(involute(C, x)))));
    EXPECT_LT(fs_distance(p, q), 1e-7);
    img.push_back(p);
  }
  // twisted cubic: exactly three independent quadrics through the image
  auto mons = monomials(4, 2);
  MatXc rows(img.size(), mons.size());
  for (size_t k = 0; k < img.size(); ++k) rows.row(k) = monomial_values(mons, img[k].normalized()).transpose();
  auto sv = singular_values_of_rows(rows);
  ASSERT_EQ(sv.size(), 10u);
  EXPECT_LT(sv[7] / sv[0], 1e-6);
  EXPECT_GT(sv[6] / sv[0], 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Torsion, IotaTest,
                         ::testing::Values(std::array<int, 4>{0, 0, 0, 0}, std::array<int, 4>{1, 2, 0, 1},
                                           std::array<int, 4>{0, 0, 2, 0}));

TEST(Embedding, IotaNeedsTorsion) {
  std::mt19937_64 rng(70);
  EXPECT_ERRC(iota_splitting(ctx(), jac().random_point(rng)), Errc::Precondition);
}

TEST(Embedding, TorsionOnTranslateBound) {
  std::mt19937_64 rng(71);
  auto t3 = torsion_points(pd(), 3);
  for (int k = 0; k < 30; ++k) {
    JacobianPoint a = jac().random_point(rng);
    int count = 0;
    for (const auto& e : t3) count += jac().on_theta(a, e);
    EXPECT_LE(count, 2);
  }
}

int torsion_on_translate_through(const CurveSpec& c, std::array<int, 4> u, std::array<int, 4> v) {
  PeriodData p = compute_periods(c);
  EmbeddingContext cx(c, p);
  const Jacobian& J = cx.jac();
  JacobianPoint x = cx.point(torsion_point(p, 3, u[0], u[1], u[2], u[3]).z);
  JacobianPoint y = cx.point(torsion_point(p, 3, v[0], v[1], v[2], v[3]).z);
  JacobianPoint a = J.tau(LengthTwoScheme::pair(x, y)).a;
  int count = 0;
  for (const auto& e : torsion_points(p, 3)) count += J.on_theta(a, cx.point(e.z));
  return count;
}

// fixed points of an order-3 automorphism
TEST(Embedding, TranslateThroughAutomorphismFixedPointsHoldsFour) {
  EXPECT_EQ(torsion_on_translate_through(jac().curve(), {0, 1, 0, 0}, {0, 0, 0, 1}), 4);
}

TEST(Embedding, TranslateThroughTwoTorsionPointsHoldsTwoGenerically) {
  CurveSpec c = new_curve({cplx(0.3, 0.1), cplx(-1.2, 0.4), cplx(0.7, -0.2), cplx(0.1, 0.9), cplx(-0.5, 0.3), 1.0, 0.0}, 0);
  EXPECT_EQ(torsion_on_translate_through(c, {0, 1, 0, 0}, {0, 0, 0, 1}), 2);
}

TEST(Embedding, TorsionIndexRoundTrip) {
  auto idx = torsion_index(pd(), ctx().point(torsion_point(pd(), 3, 2, 0, 1, 1).z), 3);
  ASSERT_TRUE(idx.has_value());
  EXPECT_EQ(*idx, (std::array<int, 4>{2, 0, 1, 1}));
}

}  // namespace
}  // namespace kummer
