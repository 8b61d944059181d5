#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kummer/projective.hpp"
#include "kummer/types.hpp"

namespace kummer {

// y^2 = f(x), f[k] the coefficient of x^k.
struct CurveSpec {
  std::array<cplx, 7> f{};
  int degree = 0;
  int eta_index = 0;
  std::vector<cplx> roots;  // finite branch points, sorted by (Re, Im)

  cplx eval(cplx x) const;
  cplx deriv(cplx x) const;
  cplx deriv2(cplx x) const;
  int num_weierstrass() const { return 6; }
  bool eta_at_infinity() const { return degree == 5 && eta_index == 5; }
  double root_scale() const;
};

struct CurvePoint {
  bool infinite = false;
  int branch = 0;  // deg 6 only: 0 means y ~ +sqrt(f6) x^3, 1 the other one
  cplx x{0.0, 0.0};
  cplx y{0.0, 0.0};

  static CurvePoint affine(cplx x, cplx y) { return {false, 0, x, y}; }
  static CurvePoint at_infinity(int branch = 0) { return {true, branch, 0.0, 0.0}; }
};

CurveSpec new_curve(const std::array<cplx, 7>& coeffs, int eta_index);
CurveSpec default_curve();

CurvePoint involute(const CurveSpec& curve, const CurvePoint& p);
ProjPoint canonical_map(const CurvePoint& p);

bool on_curve(const CurveSpec& curve, const CurvePoint& p, double rel_tol = 1e-10);
bool is_weierstrass(const CurveSpec& curve, const CurvePoint& p, double tol = 1e-12);
CurvePoint weierstrass_point(const CurveSpec& curve, int index);
CurvePoint eta_point(const CurveSpec& curve);
// Point over x with y = principal sqrt(f(x)), negated when sheet = 1.
CurvePoint lift(const CurveSpec& curve, cplx x, int sheet = 0);

// Sorted by (Re, Im) with a tolerance on the real part.
std::vector<cplx> sorted_roots(const std::vector<cplx>& r);

nlohmann::json to_json(const CurveSpec& c);
CurveSpec curve_from_json(const nlohmann::json& j);
std::string curve_hash(const CurveSpec& c);

}  // namespace kummer
