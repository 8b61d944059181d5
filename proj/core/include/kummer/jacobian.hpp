#pragma once

#include <memory>
#include <random>
#include <vector>

#include "kummer/charts.hpp"
#include "kummer/curve.hpp"
#include "kummer/periods.hpp"
#include "kummer/projective.hpp"

namespace kummer {

JacobianPoint add(const JacobianPoint& p, const JacobianPoint& q);
JacobianPoint sub(const JacobianPoint& p, const JacobianPoint& q);
JacobianPoint neg(const JacobianPoint& p);
JacobianPoint scale(const JacobianPoint& p, int k);
double point_distance(const JacobianPoint& p, const JacobianPoint& q);
bool is_equal(const JacobianPoint& p, const JacobianPoint& q, double tol = 1e-8);
std::vector<JacobianPoint> torsion_points(const PeriodData& pd, int n);
// (i, j, k, l) with z = (i col1(Omega) + j col2(Omega) + k e1 + l e2) / n.
JacobianPoint torsion_point(const PeriodData& pd, int n, int i, int j, int k, int l);

struct LengthTwoScheme {
  bool reduced = true;
  JacobianPoint a;
  JacobianPoint b;  // reduced only
  ProjPoint v;      // nonreduced only, a point of P^1

  static LengthTwoScheme pair(const JacobianPoint& a, const JacobianPoint& b);
  static LengthTwoScheme nonreduced(const JacobianPoint& a, const ProjPoint& v);
  JacobianPoint sum() const;
};

// Max of torus distances after the best matching; nonreduced parts also compare v. Infinite on type mismatch.
double scheme_distance(const LengthTwoScheme& s, const LengthTwoScheme& t);

struct RootInfo {
  ChartPoint point;
  Vec2c alpha;          // unreduced
  double residual = 0;  // normalized |G| / scale
  double transversality = 1.0;
};

struct IntersectionDiagnostics {
  int roots_found = 0;
  bool double_root = false;
  double worst_residual = 0.0;
  double min_transversality = 1.0;
};

// Curve, charts, periods and the root-finding grid, shared by the Jacobian-level operations.
class Jacobian {
 public:
  Jacobian(const CurveSpec& curve, const PeriodData& pd);
  Jacobian(const Jacobian&) = delete;
  Jacobian& operator=(const Jacobian&) = delete;

  const CurveSpec& curve() const { return curve_; }
  const PeriodData& periods() const { return pd_; }
  const CurveCharts& charts() const { return charts_; }

  JacobianPoint point(const Vec2c& z) const { return make_point(pd_, z); }
  JacobianPoint zero() const { return point(Vec2c::Zero()); }
  JacobianPoint alpha(const CurvePoint& p) const;
  Vec2c alpha_unreduced(const CurvePoint& p) const;
  // d alpha / dx at an affine point.
  Vec2c alpha_derivative(const CurvePoint& p) const;
  // A^{-1} (v0, v1): flat tangent vector for a direction of P^1_{K_C}.
  Vec2c tangent_vector(const ProjPoint& v) const;
  // Curve point over the direction v (affine x = v1 / v0, or infinity), on the given sheet.
  CurvePoint point_over(const ProjPoint& v, int sheet = 0) const;

  double theta_scale() const { return theta_scale_; }
  // normalized |theta[delta](w)| / scale
  double theta_residual(const Vec2c& w) const;
  bool on_theta(const JacobianPoint& a, const JacobianPoint& w, double tol = 1e-6) const;
  // |grad theta[delta](w - a) . t| normalized; zero when t is tangent to Theta_a at w.
  double tangency_residual(const JacobianPoint& a, const JacobianPoint& w, const Vec2c& t) const;

  LengthTwoScheme theta_intersection(const JacobianPoint& a, const JacobianPoint& b,
                                     IntersectionDiagnostics* diag = nullptr) const;
  LengthTwoScheme tau(const LengthTwoScheme& z, IntersectionDiagnostics* diag = nullptr) const;

  // Fixed well-spread curve points with their Abel-Jacobi images (one sheet each).
  const std::vector<CurvePoint>& curve_samples() const { return samples_; }
  const std::vector<Vec2c>& curve_sample_alphas() const { return sample_alphas_; }

  // Random helpers.
  JacobianPoint random_point(std::mt19937_64& rng) const;
  CurvePoint random_curve_point(std::mt19937_64& rng, bool allow_near_weierstrass = false) const;

 private:
  struct GridNode {
    ChartPoint point;
    Vec2c alpha;
  };
  bool newton(const Vec2c& d, ChartPoint p, Vec2c alpha, RootInfo* out) const;
  bool refine_double(const Vec2c& target, RootInfo* r) const;
  ChartPoint involute_chart(const ChartPoint& p) const;

  CurveSpec curve_;
  PeriodData pd_;
  CurveCharts charts_;
  double theta_scale_ = 1.0;
  std::vector<GridNode> grid_;
  std::vector<CurvePoint> samples_;
  std::vector<Vec2c> sample_alphas_;
};

inline bool on_theta(const Jacobian& J, const JacobianPoint& a, const JacobianPoint& w) { return J.on_theta(a, w); }
inline LengthTwoScheme theta_intersection(const Jacobian& J, const JacobianPoint& a, const JacobianPoint& b) {
  return J.theta_intersection(a, b);
}
inline LengthTwoScheme tau(const Jacobian& J, const LengthTwoScheme& z) { return J.tau(z); }

}  // namespace kummer
