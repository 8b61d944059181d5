#include <cstdio>
#include <filesystem>

#include <Eigen/Eigenvalues>

#include "fixture.hpp"

namespace kummer {
namespace {

using test::ctx;
using test::jac;
using test::pd;

TEST(Periods, RiemannRelations) {
  const Mat2c& Om = pd().Omega;
  EXPECT_LT((Om - Om.transpose()).norm(), 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Om.imag());
  EXPECT_GT(es.eigenvalues()(0), 1e-6);
}

TEST(Periods, DoubledQuadratureOracle) {
  PeriodOptions fine;
  fine.order = 2 * PeriodOptions{}.order;
  PeriodData q = compute_periods(jac().curve(), 1e-13, fine);
  EXPECT_LT((q.A - pd().A).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((q.B - pd().B).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((q.Omega - pd().Omega).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Periods, ThetaConstantParitySplit) {
  for (const CurveSpec& c : {jac().curve(), new_curve({1.0, 0.0, -3.0, 0.5, 0.0, 0.0, 1.0}, 0),
                             new_curve({cplx(0.2, 0.1), 1.0, 0.0, cplx(0.0, 2.0), 0.0, 1.0}, 5)}) {
    PeriodData p = compute_periods(c);
    double scale = 0.0;
    std::vector<double> vals;
    for (const auto& ch : half_characteristics()) {
      vals.push_back(std::abs(theta(ch, Vec2c::Zero(), p.Omega)));
      scale = std::max(scale, vals.back());
    }
    int odd_zero = 0, even_zero = 0;
    auto chars = half_characteristics();
    for (size_t k = 0; k < chars.size(); ++k) {
      bool z = vals[k] < 1e-8 * scale;
      (is_odd(chars[k]) ? odd_zero : even_zero) += z;
    }
    EXPECT_EQ(odd_zero, 6);
    EXPECT_EQ(even_zero, 0);
    EXPECT_TRUE(is_odd(p.delta));
    EXPECT_LT(std::abs(theta(p.delta, Vec2c::Zero(), p.Omega)), 1e-8 * scale);
  }
}

TEST(Periods, MarkedPointMapsToZero) {
  JacobianPoint o = jac().alpha(eta_point(jac().curve()));
  EXPECT_LT(torus_norm(pd(), o.z), 1e-12);
}

TEST(Periods, InvolutionNegates) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 50; ++k) {
    CurvePoint x = jac().random_curve_point(rng);
    EXPECT_LT(torus_norm(pd(), jac().alpha(x).z + jac().alpha(involute(jac().curve(), x)).z), 1e-8);
  }
}

TEST(Periods, ImageLiesOnTheta) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) EXPECT_LT(jac().theta_residual(jac().alpha(jac().random_curve_point(rng)).z), 1e-7);
}

TEST(Periods, WeierstrassPointsAreTwoTorsion) {
  const CurveSpec& c = jac().curve();
  for (int k = 0; k < 6; ++k) {
    Vec2c z = jac().alpha(weierstrass_point(c, k)).z;
    EXPECT_LT(torus_norm(pd(), 2.0 * z), 1e-8) << k;
  }
}

TEST(Periods, HomotopicPathsAgree) {
  std::mt19937_64 rng(12);
  const CurveSpec& c = jac().curve();
  int compared = 0;
  for (int k = 0; k < 10; ++k) {
    CurvePoint x = jac().random_curve_point(rng);
    auto direct = abel_jacobi_unreduced(jac().charts(), pd(), x);
    ASSERT_TRUE(direct.has_value());
    for (int b = 0; b < static_cast<int>(c.roots.size()); ++b) {
      AbelJacobiOptions o;
      o.loop_branch = b;
      auto looped = abel_jacobi_unreduced(jac().charts(), pd(), x, o);
      if (!looped) continue;
      EXPECT_LT(torus_norm(pd(), *looped - *direct), 1e-8);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(Periods, CacheRoundTrip) {
  auto path = std::filesystem::temp_directory_path() / "kummerlab_period_cache_test.json";
  std::filesystem::remove(path);
  PeriodData a = load_or_compute_periods(jac().curve(), 1e-12, path.string());
  ASSERT_TRUE(std::filesystem::exists(path));
  PeriodData b = load_or_compute_periods(jac().curve(), 1e-12, path.string());
  EXPECT_LT((a.Omega - b.Omega).norm(), 1e-15);
  EXPECT_EQ(a.curve_hash, b.curve_hash);
  std::filesystem::remove(path);
}

TEST(Periods, LatticeReduction) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    Vec2c z = test::random_z(rng);
    Eigen::Vector4d shift(3, -2, 1, 4);
    Vec2c w = z + lattice_vector(pd(), shift);
    EXPECT_LT(torus_norm(pd(), w - z), 1e-12);
    EXPECT_LT((reduce_vector(pd(), w) - reduce_vector(pd(), z)).norm(), 1e-10);
  }
}

// ---- theta kernel ----

cplx shift_factor(const ThetaChar& c, const Vec2c& z, const Mat2c& Om, const Eigen::Vector2d& n,
                  const Eigen::Vector2d& m) {
  Vec2c mc = m.cast<cplx>();
  return std::exp(2.0 * kPi * kI * c.a.dot(n) - kPi * kI * (mc.transpose() * Om * mc)(0) -
                  2.0 * kPi * kI * (mc.transpose() * (z + c.b.cast<cplx>()))(0));
}

TEST(Theta, OddVanishesAtZero) {
  for (const auto& c : half_characteristics())
    if (is_odd(c)) EXPECT_LT(std::abs(theta(c, Vec2c::Zero(), pd().Omega)), 1e-10);
}

TEST(Theta, QuasiPeriodicity) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> im(-2, 2);
  auto chars = half_characteristics();
  for (int k = 0; k < 20; ++k) {
    const ThetaChar& c = chars[k % chars.size()];
    Vec2c z = test::random_z(rng);
    Eigen::Vector2d n(im(rng), im(rng)), m(im(rng), im(rng));
    cplx lhs = theta(c, z + n.cast<cplx>() + pd().Omega * m.cast<cplx>(), pd().Omega);
    cplx rhs = shift_factor(c, z, pd().Omega, n, m) * theta(c, z, pd().Omega);
    EXPECT_LT(std::abs(lhs - rhs), 1e-8 * std::abs(rhs));
  }
}

TEST(Theta, Parity) {
  std::mt19937_64 rng(21);
  for (const auto& c : half_characteristics()) {
    Vec2c z = test::random_z(rng);
    cplx p = theta(c, z, pd().Omega), m = theta(c, -z, pd().Omega);
    EXPECT_LT(std::abs(m - (is_odd(c) ? -p : p)), 1e-10 * std::abs(p));
  }
}

TEST(Theta, LargerRadiusOracle) {
  std::mt19937_64 rng(22);
  EXPECT_GE(truncation_radius(pd().Omega, 1e-30), truncation_radius(pd().Omega, kThetaTol));
  for (int k = 0; k < 20; ++k) {
    Vec2c z = test::random_z(rng);
    cplx a = theta(pd().delta, z, pd().Omega), b = theta(pd().delta, z, pd().Omega, 1e-30);
    EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)) / theta_gaussian_weight(z, pd().Omega));
  }
}

TEST(Theta, JetOrderZeroIsValue) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    Vec2c z = test::random_z(rng);
    EXPECT_EQ(theta_jet(pd().delta, z, pd().Omega, 0, 0), theta(pd().delta, z, pd().Omega));
  }
}

TEST(Theta, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(24);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    Vec2c z = test::random_z(rng);
    ThetaJets J = theta_jets(pd().delta, z, pd().Omega, 1);
    double scale = std::max({std::abs(J(0, 0)), std::abs(J(1, 0)), std::abs(J(0, 1))});
    for (int d = 0; d < 2; ++d) {
      Vec2c e = Vec2c::Zero();
      e(d) = h;
      cplx fd = (theta(pd().delta, z + e, pd().Omega) - theta(pd().delta, z - e, pd().Omega)) / (2.0 * h);
      EXPECT_LT(std::abs(fd - J(d == 0, d == 1)), 1e-6 * scale);
    }
  }
}

TEST(Theta, EvenCharacteristicOddJetsVanishAtZero) {
  for (const auto& c : half_characteristics()) {
    if (is_odd(c)) continue;
    ThetaJets J = theta_jets(c, Vec2c::Zero(), pd().Omega, 3);
    double scale = std::abs(J.value());
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j)
        if ((i + j) % 2 == 1) EXPECT_LT(std::abs(J(i, j)), 1e-10 * scale);
  }
}

TEST(Theta, LevelThreeAutomorphy) {
  std::mt19937_64 rng(25);
  for (int k = 0; k < 20; ++k) {
    Vec2c z = test::random_z(rng);
    Vec2c w = z + lattice_vector(pd(), Eigen::Vector4d(1, -1, 2, 1));
    EXPECT_LT(fs_distance(level_basis(3, z, pd()), level_basis(3, w, pd())), 1e-9);
  }
}

TEST(Theta, LevelThreeBasePointFree) {
  std::mt19937_64 rng(26);
  std::vector<double> mods;
  for (int k = 0; k < 200; ++k) {
    Vec2c z = test::random_z(rng);
    VecXc v = level_basis(3, z, pd());
    mods.push_back(v.cwiseAbs().maxCoeff() * theta_gaussian_weight(3.0 * z, 3.0 * pd().Omega));
  }
  std::vector<double> sorted = mods;
  std::nth_element(sorted.begin(), sorted.begin() + 100, sorted.end());
  for (double m : mods) EXPECT_GT(m, 1e-10 * sorted[100]);
}

TEST(Theta, LevelTwoSignPattern) {
  std::mt19937_64 rng(27);
  auto ratios = [&](const Vec2c& z) {
    VecXc p = level_basis(2, z, pd()), m = level_basis(2, -z, pd());
    VecXc r(4);
    int ref = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(p(i)) > std::abs(p(ref))) ref = i;
    for (int i = 0; i < 4; ++i) r(i) = (m(i) / p(i)) / (m(ref) / p(ref));
    return r;
  };
  VecXc pattern = VecXc::Zero(4);
  for (int k = 0; k < 5; ++k) pattern += ratios(test::random_z(rng));
  pattern /= 5.0;
  for (int i = 0; i < 4; ++i) {
    double s = pattern(i).real();
    EXPECT_LT(std::abs(std::abs(s) - 1.0), 1e-8);
    pattern(i) = s > 0 ? 1.0 : -1.0;
  }
  for (int k = 0; k < 20; ++k) EXPECT_LT((ratios(test::random_z(rng)) - pattern).norm(), 1e-8);
}

TEST(Theta, HeisenbergTranslation) {
  for (const auto& e : {std::array<int, 4>{1, 0, 0, 0}, {0, 0, 1, 2}, {2, 1, 1, 0}}) {
    const MatrixFit& M = ctx().heisenberg(e[0], e[1], e[2], e[3]);
    JacobianPoint t = ctx().point(torsion_point(pd(), 3, e[0], e[1], e[2], e[3]).z);
    for (const auto& a : ctx().spread_points(20, 901))
      EXPECT_LT(fs_distance(M.M * ctx().phi3(a).v, ctx().phi3(add(a, t)).v), 1e-7);
  }
}

TEST(Theta, HeisenbergComposition) {
  std::mt19937_64 rng(28);
  std::uniform_int_distribution<int> d(0, 2);
  for (int k = 0; k < 10; ++k) {
    std::array<int, 4> e, f;
    for (int i = 0; i < 4; ++i) {
      e[i] = d(rng);
      f[i] = d(rng);
    }
    const MatXc& Me = ctx().heisenberg(e[0], e[1], e[2], e[3]).M;
    const MatXc& Mf = ctx().heisenberg(f[0], f[1], f[2], f[3]).M;
    const MatXc& Ms = ctx().heisenberg(e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]).M;
    EXPECT_LT(matrix_fs_distance(Me * Mf, Ms), 1e-6);
  }
}

}  // namespace
}  // namespace kummer
