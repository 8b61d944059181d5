#pragma once

#include <vector>

#include "kummer/embedding.hpp"

namespace kummer {

// Coefficients of theta[delta](z - a_0) ... theta[delta](z - a_n) in the level-(n+1) basis.
struct DivisorClassVector {
  int n = 0;
  ProjPoint coeffs;
  double residual = 0.0;  // held-out relative expansion residual
};

inline constexpr double kSumTol = 1e-8;
inline constexpr double kExpansionLimit = 1e-5;

DivisorClassVector phi_mu_theta(const EmbeddingContext& ctx, const std::vector<JacobianPoint>& points, int n);

// A point of Kum_2(A) supported on at least two points.
struct KummerTriple {
  bool reduced = true;
  JacobianPoint a;
  JacobianPoint b;  // reduced only
  JacobianPoint c;
  ProjPoint v;      // nonreduced: tangent direction at the double point a

  static KummerTriple triple(const JacobianPoint& a, const JacobianPoint& b, const JacobianPoint& c);
  static KummerTriple doubled(const JacobianPoint& a, const ProjPoint& v, const JacobianPoint& c);
  // Support points with multiplicity.
  std::vector<JacobianPoint> points() const;
  double min_separation() const;
};

// Line in P^8 spanned by a length-two scheme.
Subspace secant_line(const EmbeddingContext& ctx, const LengthTwoScheme& z);

struct PhiDDiagnostics {
  double sigma_min = 0.0;   // smallest singular value of the stacked complements
  double sigma_next = 0.0;
  double route_gap = 0.0;   // distance to the secant-line construction
};

inline constexpr double kIntersectTol = 1e-6;

ProjPoint phi_D(const EmbeddingContext& ctx, const KummerTriple& xi, PhiDDiagnostics* diag = nullptr);

// Fubini-Study gap between the Coble polar of phi_D and the level-3 divisor vector.
double verify_duality(const EmbeddingContext& ctx, const KummerTriple& xi);

struct K3Models {
  ProjPoint minus;          // in P^3 via phi2
  DivisorClassVector plus;  // n = 1
};

K3Models k3_models(const EmbeddingContext& ctx, const JacobianPoint& a);
// Fixed coordinate change taking the Kummer polar of the first model to the second.
const MatrixFit& k3_coordinate_change(const EmbeddingContext& ctx);
double k3_gap(const EmbeddingContext& ctx, const JacobianPoint& a);

struct WeddleFit {
  FitResult fit;
  IotaSplitting split;
  double worst_span_distance = 0.0;  // of the sampled images from P3_0
  int samples = 0;
};

WeddleFit weddle_fit(const EmbeddingContext& ctx, int samples = 70, std::uint64_t seed = 7);
// |Q(q)| for the normalized P3_0 coordinates of phi_D({b, -b, 0}).
double weddle_residual(const EmbeddingContext& ctx, const WeddleFit& w, const JacobianPoint& b);

}  // namespace kummer
