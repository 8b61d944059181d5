#pragma once

#include <array>
#include <vector>

#include "kummer/types.hpp"

namespace kummer {

struct PeriodData;

struct ThetaChar {
  Eigen::Vector2d a{0.0, 0.0};
  Eigen::Vector2d b{0.0, 0.0};
};

// Components reduced to [0, 1).
ThetaChar make_char(const Eigen::Vector2d& a, const Eigen::Vector2d& b);
// The 16 half-integer characteristics, ordered by (2a, 2b) as a 4-bit number.
std::vector<ThetaChar> half_characteristics();
bool is_odd(const ThetaChar& c);

inline constexpr double kThetaTol = 1e-12;
inline constexpr int kMaxRadius = 64;
inline constexpr int kMaxJetOrder = 4;

// All partial derivatives d^(i+j)/dz1^i dz2^j with i + j <= order.
struct ThetaJets {
  int order = 0;
  std::vector<cplx> d;

  static int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }
  cplx operator()(int i, int j) const { return d[index(i, j)]; }
  cplx value() const { return d[0]; }
};

int truncation_radius(const Mat2c& Omega, double tol);

cplx theta(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, double tol = kThetaTol);
cplx theta_jet(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, int i, int j, double tol = kThetaTol);
ThetaJets theta_jets(const ThetaChar& ch, const Vec2c& z, const Mat2c& Omega, int order, double tol = kThetaTol);

// |theta(z)| exp(-pi y^T (Im Omega)^{-1} y); invariant under lattice translation.
double theta_normalized_modulus(cplx value, const Vec2c& z, const Mat2c& Omega);
// exp(-pi y^T Y^{-1} y), the factor used above.
double theta_gaussian_weight(const Vec2c& z, const Mat2c& Omega);

// Characteristics of the level-n basis: a = frac(delta' + sigma/n), b = frac(n delta''), sigma row-major.
std::vector<ThetaChar> level_characteristics(int n, const ThetaChar& delta);
VecXc level_basis(int n, const Vec2c& z, const PeriodData& pd);
// Jets with respect to z of the level-n basis, one entry per basis element.
std::vector<ThetaJets> level_basis_jets(int n, const Vec2c& z, const PeriodData& pd, int order);

}  // namespace kummer
