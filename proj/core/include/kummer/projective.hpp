#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kummer/types.hpp"

namespace kummer {

// Unit-norm homogeneous coordinates; first coordinate above 1e-10 of the max is real positive.
struct ProjPoint {
  VecXc v;

  ProjPoint() = default;
  explicit ProjPoint(const VecXc& coords);
  Eigen::Index size() const { return v.size(); }
};

ProjPoint normalize(const VecXc& coords);

// sqrt(1 - |<p,q>|^2) for unit vectors.
double fs_distance(const ProjPoint& p, const ProjPoint& q);
double fs_distance(const VecXc& p, const VecXc& q);

struct Subspace {
  int ambient = 0;  // N, cone lives in C^{N+1}
  MatXc basis;      // (N+1) x (k+1), orthonormal columns

  int proj_dim() const { return static_cast<int>(basis.cols()) - 1; }
  MatXc projector() const { return basis * basis.adjoint(); }
};

inline constexpr double kDefaultRankTol = 1e-8;

Subspace span(const std::vector<ProjPoint>& points, double rank_tol = kDefaultRankTol);
Subspace span_vectors(const MatXc& columns, double rank_tol = kDefaultRankTol);
Subspace intersect(const std::vector<Subspace>& subspaces, double rank_tol = kDefaultRankTol);

// Distance from p to the cone of s: norm of the orthogonal residual of the unit vector.
double distance_to_subspace(const ProjPoint& p, const Subspace& s);
double distance_to_subspace(const VecXc& p, const Subspace& s);
// Spectral norm of the projector difference.
double subspace_distance(const Subspace& a, const Subspace& b);
// Sine of the smallest principal angle between the cones.
double min_angle_sine(const Subspace& a, const Subspace& b);

std::vector<double> singular_values_of_rows(const MatXc& rows);

inline constexpr const char* kMonomialOrder = "graded-lex/v1";

// Exponent tuples of degree d in m variables, graded-lex (x0 largest first).
std::vector<std::vector<int>> monomials(int num_vars, int degree);

struct FormCoefficients {
  int degree = 0;
  int num_vars = 0;
  VecXc coeffs;

  cplx eval(const VecXc& x) const;
  VecXc gradient(const VecXc& x) const;
  MatXc hessian(const VecXc& x) const;
};

VecXc monomial_values(const std::vector<std::vector<int>>& mons, const VecXc& x);
// Rows: d/dx_j of each monomial.
MatXc monomial_gradients(const std::vector<std::vector<int>>& mons, const VecXc& x);

struct FitResult {
  FormCoefficients form;
  double gap = 0.0;
  std::vector<double> tail;  // smallest normalized singular values, ascending
  int conditions = 0;
};

enum class JetConditions { None, Gradient };

FitResult fit_hypersurface(const std::vector<ProjPoint>& samples, int degree, JetConditions jets,
                           double rank_tol = kDefaultRankTol);

ProjPoint polar_map(const FormCoefficients& F, const ProjPoint& p, double indeterminacy_tol = 1e-10);

// Projective linear map M (rows = out dim, cols = in dim) with M src_k proportional to dst_k.
struct MatrixFit {
  MatXc M;
  double gap = 0.0;
};
MatrixFit fit_projective_map(const std::vector<VecXc>& src, const std::vector<VecXc>& dst);

// Projective distance between two matrices viewed as vectors.
double matrix_fs_distance(const MatXc& a, const MatXc& b);

nlohmann::json to_json(const FormCoefficients& F);
FormCoefficients form_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(cplx c);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace kummer
