#include <algorithm>

#include <Eigen/Eigenvalues>

#include "fixture.hpp"

namespace kummer {
namespace {

using test::jac;

std::array<cplx, 7> coeffs(std::initializer_list<double> f) {
  std::array<cplx, 7> c{};
  int k = 0;
  for (double x : f) c[k++] = x;
  return c;
}

TEST(Curve, DefaultCurveBranchPoints) {
  CurveSpec c = new_curve(coeffs({0, -1, 0, 0, 0, 1}), 2);
  EXPECT_EQ(c.degree, 5);
  ASSERT_EQ(c.roots.size(), 5u);
  // companion-matrix oracle, independent of the library's root finder
  Eigen::Matrix<cplx, 5, 5> comp = Eigen::Matrix<cplx, 5, 5>::Zero();
  for (int i = 1; i < 5; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < 5; ++i) comp(i, 4) = -c.f[i] / c.f[5];
  Eigen::ComplexEigenSolver<Eigen::Matrix<cplx, 5, 5>> es(comp);
  for (int i = 0; i < 5; ++i) {
    cplx r = es.eigenvalues()(i);
    double best = 1e9;
    for (const auto& q : c.roots) best = std::min(best, std::abs(q - r));
    EXPECT_LT(best, 1e-12);
  }
  const cplx expected[5] = {1.0, -1.0, kI, -kI, 0.0};
  for (cplx e : expected) {
    double best = 1e9;
    for (const auto& q : c.roots) best = std::min(best, std::abs(q - e));
    EXPECT_LT(best, 1e-12);
    EXPECT_LT(std::abs(c.eval(e)), 1e-12);
  }
  EXPECT_LT(std::abs(eta_point(c).x), 1e-14);
  EXPECT_FALSE(eta_point(c).infinite);
}

TEST(Curve, BadDegree) { EXPECT_ERRC(new_curve(coeffs({0, 0, 0, 0, 1}), 0), Errc::BadDegree); }

TEST(Curve, RepeatedRoot) { EXPECT_ERRC(new_curve(coeffs({0, 0, 0, 1, -2, 1}), 0), Errc::NotSquarefree); }

TEST(Curve, NearlyRepeatedRoot) {
  // (x - 1)(x - 1 - 1e-10) x (x + 1)(x + 2)
  std::vector<cplx> roots = {1.0, 1.0 + 1e-10, 0.0, -1.0, -2.0};
  std::array<cplx, 7> f{};
  f[0] = 1.0;
  for (cplx r : roots) {
    for (int k = 6; k >= 1; --k) f[k] = f[k - 1] - r * f[k];
    f[0] = -r * f[0];
  }
  EXPECT_ERRC(new_curve(f, 0), Errc::NotSquarefree);
}

TEST(Curve, BadEtaIndex) { EXPECT_ERRC(new_curve(coeffs({0, -1, 0, 0, 0, 1}), 7), Errc::BadEtaIndex); }

TEST(Curve, Involute) {
  const CurveSpec& c = jac().curve();
  CurvePoint p = lift(c, 2.0);
  CurvePoint q = involute(c, p);
  EXPECT_EQ(q.x, p.x);
  EXPECT_LT(std::abs(q.y + p.y), 1e-14);
  CurvePoint w = CurvePoint::affine(0.0, 0.0);
  CurvePoint wi = involute(c, w);
  EXPECT_LT(std::abs(wi.x) + std::abs(wi.y), 1e-14);
  EXPECT_TRUE(is_weierstrass(c, w));
}

TEST(Curve, InvoluteIsInvolution) {
  std::mt19937_64 rng(1);
  const CurveSpec& c = jac().curve();
  for (int k = 0; k < 100; ++k) {
    CurvePoint p = jac().random_curve_point(rng);
    CurvePoint q = involute(c, involute(c, p));
    EXPECT_LT(std::abs(q.x - p.x) + std::abs(q.y - p.y), 1e-14);
  }
}

TEST(Curve, CanonicalMap) {
  const CurveSpec& c = jac().curve();
  EXPECT_LT(fs_distance(canonical_map(lift(c, 2.0)), normalize(Vec2c(1.0, 2.0))), 1e-15);
  EXPECT_LT(fs_distance(canonical_map(CurvePoint::at_infinity()), normalize(Vec2c(0.0, 1.0))), 1e-15);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    CurvePoint p = jac().random_curve_point(rng);
    EXPECT_LT(fs_distance(canonical_map(p), canonical_map(involute(c, p))), 1e-15);
  }
}

TEST(Curve, SampledPointsLieOnCurve) {
  std::mt19937_64 rng(3);
  const CurveSpec& c = jac().curve();
  for (int k = 0; k < 100; ++k) {
    CurvePoint p = jac().random_curve_point(rng, true);
    ASSERT_FALSE(p.infinite);
    EXPECT_LT(std::abs(p.y * p.y - c.eval(p.x)), 1e-10 * std::max(1.0, std::abs(p.y * p.y)));
  }
}

TEST(Curve, FixedPointsAreWeierstrass) {
  std::mt19937_64 rng(4);
  const CurveSpec& c = jac().curve();
  for (int k = 0; k < 6; ++k) {
    CurvePoint w = weierstrass_point(c, k);
    CurvePoint wi = involute(c, w);
    EXPECT_TRUE(w.infinite == wi.infinite && std::abs(w.x - wi.x) + std::abs(w.y - wi.y) < 1e-14);
  }
  for (int k = 0; k < 50; ++k) {
    CurvePoint p = jac().random_curve_point(rng);
    CurvePoint q = involute(c, p);
    EXPECT_GT(std::abs(p.y - q.y), 1e-8);
    EXPECT_FALSE(is_weierstrass(c, p));
  }
}

TEST(Curve, CanonicalMapDegreeTwo) {
  // two preimages over a generic value, one over each branch value
  const CurveSpec& c = jac().curve();
  CurvePoint p = lift(c, cplx(0.3, 0.7), 0), q = lift(c, cplx(0.3, 0.7), 1);
  EXPECT_LT(fs_distance(canonical_map(p), canonical_map(q)), 1e-15);
  EXPECT_GT(std::abs(p.y - q.y), 1e-3);
  for (const auto& r : c.roots) {
    CurvePoint a = lift(c, r, 0), b = lift(c, r, 1);
    EXPECT_LT(std::abs(a.y - b.y), 1e-6);
  }
}

TEST(Curve, JsonRoundTrip) {
  const CurveSpec& c = jac().curve();
  CurveSpec d = curve_from_json(to_json(c));
  EXPECT_EQ(curve_hash(c), curve_hash(d));
  EXPECT_EQ(d.eta_index, c.eta_index);
}

TEST(Curve, SexticModel) {
  CurveSpec c = new_curve(coeffs({1, 0, -3, 0.5, 0, 0, 1}), 0);
  EXPECT_EQ(c.degree, 6);
  EXPECT_EQ(c.roots.size(), 6u);
}

}  // namespace
}  // namespace kummer
