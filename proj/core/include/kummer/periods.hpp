#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kummer/charts.hpp"
#include "kummer/curve.hpp"
#include "kummer/theta.hpp"
#include "kummer/types.hpp"

namespace kummer {

struct PeriodData {
  Mat2c Omega;
  Mat2c A;  // A(k, j) = integral of omega_k over a_j, omega = (dx/y, x dx/y)
  Mat2c B;
  Mat2c Ainv;
  ThetaChar delta;
  Eigen::Matrix2d Y;
  Eigen::Matrix2d Yinv;
  Eigen::Matrix4i cycle_basis;  // rows a1, a2, b1, b2 in terms of the chain loops
  Eigen::Matrix4i intersection;  // of the chain loops
  int quadrature_order = 0;
  int refinements = 0;
  double precision_target = 0.0;
  double refinement_change = 0.0;
  std::string curve_hash;
  std::string shift_convention;

  void finalize();
};

struct PeriodOptions {
  int order = 16;
  double loop_radius_factor = 0.35;
};

PeriodData compute_periods(const CurveSpec& curve, double precision_target = 1e-12, const PeriodOptions& opts = {});

// z = n + Omega k with real n, k.
Eigen::Vector4d lattice_coords(const PeriodData& pd, const Vec2c& z);
Vec2c lattice_vector(const PeriodData& pd, const Eigen::Vector4d& nk);
Vec2c reduce_vector(const PeriodData& pd, const Vec2c& z);
double torus_norm(const PeriodData& pd, const Vec2c& z);

struct JacobianPoint {
  Vec2c z = Vec2c::Zero();
  const PeriodData* pd = nullptr;
};

JacobianPoint make_point(const PeriodData& pd, const Vec2c& z);

struct AbelJacobiOptions {
  int loop_branch = -1;         // circle this finite branch point once on the way
  bool allow_negation = true;   // land on the requested sheet via alpha(i p) = -alpha(p)
  int order = 16;
};

// Unreduced normalized integral from the marked Weierstrass point; nullopt when the sheet cannot be matched.
std::optional<Vec2c> abel_jacobi_unreduced(const CurveCharts& charts, const PeriodData& pd, const CurvePoint& p,
                                           const AbelJacobiOptions& opts = {});
// Same, returning the raw integrals of (dx/y, x dx/y).
std::optional<Vec2c> abel_jacobi_raw(const CurveCharts& charts, const CurvePoint& p, const AbelJacobiOptions& opts = {});
JacobianPoint abel_jacobi(const CurveSpec& curve, const PeriodData& pd, const CurvePoint& p);

// Integrals of the raw differentials over the chain loops around consecutive branch points.
std::vector<Vec2c> chain_loop_integrals(const CurveCharts& charts, int order, double radius_factor);
Eigen::Matrix4i chain_intersection_matrix(const CurveCharts& charts, double radius_factor);
// Integer S with S E S^T = [[0, I], [-I, 0]].
Eigen::Matrix4i symplectic_reduction(const Eigen::Matrix4i& E);

nlohmann::json to_json(const PeriodData& pd);
PeriodData period_data_from_json(const nlohmann::json& j);

std::string period_cache_key(const CurveSpec& curve, double precision_target);
// Loads from the cache file when the key matches, otherwise computes and writes it.
PeriodData load_or_compute_periods(const CurveSpec& curve, double precision_target, const std::string& cache_path);

}  // namespace kummer
