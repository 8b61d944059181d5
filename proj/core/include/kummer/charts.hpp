#pragma once

#include <vector>

#include "kummer/curve.hpp"
#include "kummer/types.hpp"

namespace kummer {

// Local parametrizations of the curve.
//   Affine:   s = x, r = y,                      r^2 = f(x)
//   Branch k: x = w_k + s^2, y = s r,            r^2 = f(x) / (x - w_k)
//   Infinity: deg 6: x = 1/s, y = r / s^3;   deg 5: x = 1/s^2, y = r / s^5
enum class ChartKind { Affine, Branch, Infinity };

struct ChartPoint {
  ChartKind kind = ChartKind::Affine;
  int branch = -1;
  cplx s{0.0, 0.0};
  cplx r{0.0, 0.0};
};

class CurveCharts {
 public:
  explicit CurveCharts(const CurveSpec& curve);

  const CurveSpec& curve() const { return curve_; }

  cplx root_sq(ChartKind k, int branch, cplx s) const;
  cplx x_of(ChartKind k, int branch, cplx s) const;
  // (dx/y, x dx/y) per unit ds.
  Vec2c raw_differential(const ChartPoint& p) const;
  const std::vector<cplx>& singularities(ChartKind k, int branch) const;
  double singular_distance(const ChartPoint& p) const;

  // Radius of the disc served by each branch chart, and the modulus beyond which the infinity chart is used.
  double branch_radius(int k) const { return branch_radius_[k]; }
  double infinity_radius() const { return inf_radius_; }
  double clearance() const { return clearance_; }

  CurvePoint to_curve_point(const ChartPoint& p) const;
  ChartPoint from_curve_point(const CurvePoint& p) const;
  ChartPoint convert(const ChartPoint& p, ChartKind k, int branch) const;
  ChartPoint preferred(const ChartPoint& p) const;
  ChartPoint center(ChartKind k, int branch) const;

  // Integrates the raw differentials along the straight chart segment p.s -> s1 with nearest-root
  // continuation; subdivides so each piece stays within half its distance to a singularity.
  Vec2c integrate_segment(const ChartPoint& p, cplx s1, ChartPoint* end, int order) const;
  // Straight path with detours around singularities closer than the clearance.
  Vec2c integrate_with_detours(const ChartPoint& p, cplx s1, ChartPoint* end, int order) const;
  std::vector<cplx> plan_detours(ChartKind k, int branch, cplx s0, cplx s1) const;

  cplx continue_root(ChartKind k, int branch, cplx s, cplx previous) const;

 private:
  CurveSpec curve_;
  std::vector<cplx> affine_sing_;
  std::vector<std::vector<cplx>> branch_sing_;
  std::vector<cplx> inf_sing_;
  std::vector<double> branch_radius_;
  double inf_radius_ = 0.0;
  double clearance_ = 0.0;
  std::vector<std::vector<cplx>> branch_quotients_;  // coefficients of f / (x - w_k), low to high
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace kummer
