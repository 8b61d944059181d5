#include "kummer/theta.hpp"

#include <cmath>

#include "kummer/periods.hpp"

namespace kummer {

namespace {

double frac(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0 - 1e-15) r = 0.0;
  return r;
}

struct LatticeGeometry {
  Eigen::Matrix2d Y;
  Eigen::Matrix2d Yinv;
  double detY;
};

LatticeGeometry geometry(const Mat2c& Omega) {
  LatticeGeometry g;
  g.Y = Omega.imag();
  g.detY = g.Y.determinant();
  if (!(g.detY > 0.0) || !(g.Y(0, 0) > 0.0)) throw Error(Errc::Precondition, "Im Omega is not positive definite");
  g.Yinv = g.Y.inverse();
  return g;
}

template <typename Fn>
void enumerate_terms(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, double tol, int order, Fn&& fn) {
  LatticeGeometry g = geometry(Omega);
  truncation_radius(Omega, tol);
  Eigen::Vector2d y = z.imag();
  Eigen::Vector2d c = -ch.a - g.Yinv * y;
  const double Q = (std::log(1.0 / tol) + 3.0 + 3.0 * order) / kPi;
  const double Y11 = g.Y(0, 0), Y12 = g.Y(0, 1), Y22 = g.Y(1, 1);
  const double u1max = std::sqrt(Q * Y22 / g.detY);
  const long m1lo = static_cast<long>(std::ceil(c(0) - u1max));
  const long m1hi = static_cast<long>(std::floor(c(0) + u1max));
  (void)Y11;
  const cplx twopii = 2.0 * kPi * kI;
  const cplx zb1 = z(0) + ch.b(0), zb2 = z(1) + ch.b(1);
  for (long m1 = m1lo; m1 <= m1hi; ++m1) {
    const double u1 = double(m1) - c(0);
    const double rem = Q - g.detY / Y22 * u1 * u1;
    if (rem < 0.0) continue;
    const double u2c = -Y12 * u1 / Y22;
    const double w = std::sqrt(rem / Y22);
    const long m2lo = static_cast<long>(std::ceil(c(1) + u2c - w));
    const long m2hi = static_cast<long>(std::floor(c(1) + u2c + w));
    const double v1 = double(m1) + ch.a(0);
    for (long m2 = m2lo; m2 <= m2hi; ++m2) {
      const double v2 = double(m2) + ch.a(1);
      cplx e = kPi * kI * (Omega(0, 0) * (v1 * v1) + 2.0 * Omega(0, 1) * (v1 * v2) + Omega(1, 1) * (v2 * v2)) +
               twopii * (v1 * zb1 + v2 * zb2);
      fn(v1, v2, std::exp(e));
    }
  }
}

}  // namespace

ThetaChar make_char(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  ThetaChar c;
  c.a = Eigen::Vector2d(frac(a(0)), frac(a(1)));
  c.b = Eigen::Vector2d(frac(b(0)), frac(b(1)));
  return c;
}

std::vector<ThetaChar> half_characteristics() {
  std::vector<ThetaChar> out;
  for (int bits = 0; bits < 16; ++bits) {
    Eigen::Vector2d a(0.5 * ((bits >> 3) & 1), 0.5 * ((bits >> 2) & 1));
    Eigen::Vector2d b(0.5 * ((bits >> 1) & 1), 0.5 * (bits & 1));
    out.push_back(make_char(a, b));
  }
  return out;
}

bool is_odd(const ThetaChar& c) {
  long s = std::lround(4.0 * c.a.dot(c.b));
  return (s % 2) != 0;
}

int truncation_radius(const Mat2c& Omega, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Eigen::Matrix2d(Omega.imag()));
  double lmin = es.eigenvalues()(0);
  if (!(lmin > 0.0)) throw Error(Errc::Precondition, "Im Omega is not positive definite");
  double r = std::ceil(std::sqrt(std::log(1.0 / tol) / (kPi * lmin))) + 2.0;
  if (r > kMaxRadius) throw Error(Errc::RadiusOverflow, "required radius " + std::to_string(r));
  return static_cast<int>(r);
}

cplx theta(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, double tol) {
  cplx s = 0.0;
  enumerate_terms(ch, z, Omega, tol, 0, [&](double, double, cplx t) { s += t; });
  return s;
}

ThetaJets theta_jets(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, int order, double tol) {
  if (order < 0 || order > kMaxJetOrder) throw Error(Errc::Precondition, "jet order must be in [0, 4]");
  ThetaJets out;
  out.order = order;
  out.d.assign(ThetaJets::index(0, order) + 1, cplx(0.0));
  const cplx twopii = 2.0 * kPi * kI;
  std::array<cplx, kMaxJetOrder + 1> p1{}, p2{};
  enumerate_terms(ch, z, Omega, tol, order, [&](double v1, double v2, cplx t) {
    p1[0] = p2[0] = 1.0;
    for (int k = 1; k <= order; ++k) {
      p1[k] = p1[k - 1] * (twopii * v1);
      p2[k] = p2[k - 1] * (twopii * v2);
    }
    for (int tot = 0; tot <= order; ++tot)
      for (int j = 0; j <= tot; ++j) out.d[ThetaJets::index(tot - j, j)] += t * p1[tot - j] * p2[j];
  });
  return out;
}

cplx theta_jet(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, int i, int j, double tol) {
  if (i < 0 || j < 0) throw Error(Errc::Precondition, "negative jet index");
  return theta_jets(ch, z, Omega, i + j, tol)(i, j);
}

double theta_gaussian_weight(const Vec2c& z, const Mat2c& Omega) {
  Eigen::Matrix2d Y = Omega.imag();
  Eigen::Vector2d y = z.imag();
  return std::exp(-kPi * y.dot(Y.inverse() * y));
}

double theta_normalized_modulus(cplx value, const Vec2c& z, const Mat2c& Omega) {
  return std::abs(value) * theta_gaussian_weight(z, Omega);
}

std::vector<ThetaChar> level_characteristics(int n, const ThetaChar& delta) {
  std::vector<ThetaChar> out;
  Eigen::Vector2d b = double(n) * delta.b;
  for (int s1 = 0; s1 < n; ++s1)
    for (int s2 = 0; s2 < n; ++s2) {
      Eigen::Vector2d a = delta.a + Eigen::Vector2d(double(s1) / n, double(s2) / n);
      out.push_back(make_char(a, b));
    }
  return out;
}

VecXc level_basis(int n, const Vec2c& z, const PeriodData& pd) {
  if (n < 1 || n > 4) throw Error(Errc::Precondition, "level must be in [1, 4]");
  auto chars = level_characteristics(n, pd.delta);
  Mat2c nO = double(n) * pd.Omega;
  Vec2c nz = double(n) * z;
  VecXc v(chars.size());
  for (size_t k = 0; k < chars.size(); ++k) v(k) = theta(chars[k], nz, nO);
  return v;
}

std::vector<ThetaJets> level_basis_jets(int n, const Vec2c& z, const PeriodData& pd, int order) {
  if (n < 1 || n > 4) throw Error(Errc::Precondition, "level must be in [1, 4]");
  auto chars = level_characteristics(n, pd.delta);
  Mat2c nO = double(n) * pd.Omega;
  Vec2c nz = double(n) * z;
  std::vector<ThetaJets> out;
  out.reserve(chars.size());
  for (const auto& ch : chars) {
    ThetaJets j = theta_jets(ch, nz, nO, order);
    for (int tot = 0; tot <= order; ++tot) {
      double f = std::pow(double(n), tot);
      for (int q = 0; q <= tot; ++q) j.d[ThetaJets::index(tot - q, q)] *= f;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace kummer
