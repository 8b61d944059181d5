#include "kummer/kummer_maps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace kummer {

namespace {

constexpr std::uint64_t kExpansionSeed = 0x5eed0001;
constexpr int kHeldOut = 20;

struct NullResult {
  VecXc vec;
  double sigma_min = 0.0;
  double sigma_next = 0.0;
};

// Common vector of several cones: smallest right singular vector of the stacked complements.
NullResult common_direction(const std::vector<Subspace>& subs) {
  const int n = static_cast<int>(subs.front().basis.rows());
  MatXc rows(n * subs.size(), n);
  for (size_t k = 0; k < subs.size(); ++k)
    rows.middleRows(k * n, n) = MatXc::Identity(n, n) - subs[k].projector();
  Eigen::JacobiSVD<MatXc> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  NullResult r;
  r.vec = svd.matrixV().col(n - 1);
  r.sigma_min = sv(n - 1);
  r.sigma_next = sv(n - 2);
  return r;
}

}  // namespace

DivisorClassVector phi_mu_theta(const EmbeddingContext& ctx, const std::vector<JacobianPoint>& points, int n) {
  if (n < 1 || n > 3) throw Error(Errc::Precondition, "phi_mu_theta supports n = 1, 2, 3");
  if (static_cast<int>(points.size()) != n + 1) throw Error(Errc::Precondition, "need n + 1 points");
  const PeriodData& pd = ctx.periods();
  Vec2c sum = Vec2c::Zero();
  for (const auto& p : points) sum += p.z;
  if (torus_norm(pd, sum) > kSumTol) throw Error(Errc::SumNotZero, "points do not sum to zero");
  // exact representatives summing to zero in C^2
  std::vector<Vec2c> reps;
  Vec2c partial = Vec2c::Zero();
  for (int i = 0; i < n; ++i) {
    reps.push_back(points[i].z);
    partial += points[i].z;
  }
  reps.push_back(-partial);

  const int m = n + 1;
  const int nb = m * m;
  const int nfit = 3 * nb;
  auto zs = spread_cell(pd, nfit + kHeldOut, kExpansionSeed + n);
  MatXc B(nfit + kHeldOut, nb);
  VecXc rhs(nfit + kHeldOut);
  for (int k = 0; k < nfit + kHeldOut; ++k) {
    VecXc b = level_basis(m, zs[k], pd);
    cplx prod = 1.0;
    for (const auto& r : reps) prod *= theta(pd.delta, zs[k] - r, pd.Omega);
    double s = b.norm();
    B.row(k) = b.transpose() / s;
    rhs(k) = prod / s;
  }
  VecXc c = B.topRows(nfit).colPivHouseholderQr().solve(rhs.head(nfit));
  double resid = 0.0;
  for (int k = nfit; k < nfit + kHeldOut; ++k)
    resid = std::max(resid, std::abs(rhs(k) - (B.row(k) * c).value()) / c.norm());
  if (resid > kExpansionLimit)
    throw Error(Errc::ExpansionResidualTooLarge, "product is not a section of the expected level");
  DivisorClassVector out;
  out.n = n;
  out.coeffs = normalize(c);
  out.residual = resid;
  return out;
}

KummerTriple KummerTriple::triple(const JacobianPoint& a, const JacobianPoint& b, const JacobianPoint& c) {
  KummerTriple t;
  t.reduced = true;
  t.a = a;
  t.b = b;
  t.c = c;
  return t;
}

KummerTriple KummerTriple::doubled(const JacobianPoint& a, const ProjPoint& v, const JacobianPoint& c) {
  KummerTriple t;
  t.reduced = false;
  t.a = a;
  t.b = a;
  t.c = c;
  t.v = v;
  return t;
}

std::vector<JacobianPoint> KummerTriple::points() const { return {a, b, c}; }

double KummerTriple::min_separation() const {
  if (!reduced) return point_distance(a, c);
  return std::min({point_distance(a, b), point_distance(a, c), point_distance(b, c)});
}

Subspace secant_line(const EmbeddingContext& ctx, const LengthTwoScheme& z) {
  MatXc cols(9, 2);
  if (z.reduced) {
    cols.col(0) = ctx.phi3(z.a).v;
    cols.col(1) = ctx.phi3(z.b).v;
  } else {
    MatXc J = ctx.theta3_jets(z.a.z, 1);
    Vec2c t = ctx.jac().tangent_vector(z.v);
    double s = J.col(0).norm();
    cols.col(0) = J.col(0) / s;
    cols.col(1) = (J.col(1) * t(0) + J.col(2) * t(1)) / s;
  }
  Subspace L = span_vectors(cols, 1e-10);
  if (L.proj_dim() != 1) throw Error(Errc::UnexpectedDimension, "secant line degenerates");
  return L;
}

ProjPoint phi_D(const EmbeddingContext& ctx, const KummerTriple& xi, PhiDDiagnostics* diag) {
  if (xi.min_separation() < 1e-6) throw Error(Errc::Precondition, "triple must be supported on at least two points");
  const Jacobian& J = ctx.jac();
  NullResult primary;
  if (xi.reduced) {
    primary = common_direction({ctx.translate_span(xi.a), ctx.translate_span(xi.b), ctx.translate_span(xi.c)});
  } else {
    primary = common_direction({secant_line(ctx, J.tau(LengthTwoScheme::pair(xi.a, xi.c))),
                                secant_line(ctx, J.tau(LengthTwoScheme::nonreduced(xi.a, xi.v)))});
  }
  if (diag) {
    diag->sigma_min = primary.sigma_min;
    diag->sigma_next = primary.sigma_next;
  }
  if (primary.sigma_min > kIntersectTol) throw Error(Errc::EmptyIntersection, "spans have no common point");
  if (primary.sigma_next < kIntersectTol) throw Error(Errc::UnexpectedDimension, "spans meet in more than a point");
  ProjPoint p = normalize(primary.vec);
  if (diag && xi.reduced) {
    NullResult sec = common_direction({secant_line(ctx, J.tau(LengthTwoScheme::pair(xi.a, xi.b))),
                                       secant_line(ctx, J.tau(LengthTwoScheme::pair(xi.a, xi.c)))});
    diag->route_gap = fs_distance(p.v, sec.vec);
  }
  return p;
}

double verify_duality(const EmbeddingContext& ctx, const KummerTriple& xi) {
  ProjPoint p = phi_D(ctx, xi);
  ProjPoint d;
  try {
    d = ctx.coble_polar(p);
  } catch (const Error& e) {
    if (e.code() == Errc::IndeterminacyPoint) throw Error(Errc::OnContractedLocus, "phi_D lands on the abelian surface");
    throw;
  }
  DivisorClassVector m = phi_mu_theta(ctx, xi.points(), 2);
  return fs_distance(d, m.coeffs);
}

K3Models k3_models(const EmbeddingContext& ctx, const JacobianPoint& a) {
  if (torus_norm(ctx.periods(), 2.0 * a.z) < 1e-6) throw Error(Errc::Precondition, "a must not be 2-torsion");
  JacobianPoint na = neg(a);
  LengthTwoScheme t = ctx.jac().tau(LengthTwoScheme::pair(a, na));
  K3Models out;
  out.minus = ctx.phi2(t.a);
  out.plus = phi_mu_theta(ctx, {a, na}, 1);
  return out;
}

const MatrixFit& k3_coordinate_change(const EmbeddingContext& ctx) {
  return ctx.cached_map("k3_coordinate_change", [&ctx]() {
    std::vector<VecXc> src, dst;
    for (const auto& z : spread_cell(ctx.periods(), 6, ctx.options().seed + 17)) {
      K3Models m = k3_models(ctx, ctx.point(z));
      src.push_back(ctx.kummer_polar(m.minus).v);
      dst.push_back(m.plus.coeffs.v);
    }
    return fit_projective_map(src, dst);
  });
}

double k3_gap(const EmbeddingContext& ctx, const JacobianPoint& a) {
  const MatrixFit& G = k3_coordinate_change(ctx);
  K3Models m = k3_models(ctx, a);
  return fs_distance(G.M * ctx.kummer_polar(m.minus).v, m.plus.coeffs.v);
}

WeddleFit weddle_fit(const EmbeddingContext& ctx, int samples, std::uint64_t seed) {
  WeddleFit out;
  out.split = iota_splitting(ctx, ctx.zero());
  out.samples = samples;
  std::vector<ProjPoint> pts;
  const JacobianPoint o = ctx.zero();
  for (const auto& b : ctx.spread_points(samples, 5000 + seed)) {
    ProjPoint q = phi_D(ctx, KummerTriple::triple(b, neg(b), o));
    out.worst_span_distance = std::max(out.worst_span_distance, distance_to_subspace(q, out.split.P3));
    pts.push_back(normalize(out.split.P3.basis.adjoint() * q.v));
  }
  out.fit = fit_hypersurface(pts, 4, JetConditions::None);
  return out;
}

double weddle_residual(const EmbeddingContext& ctx, const WeddleFit& w, const JacobianPoint& b) {
  ProjPoint q = phi_D(ctx, KummerTriple::triple(b, neg(b), ctx.zero()));
  ProjPoint c = normalize(w.split.P3.basis.adjoint() * q.v);
  return std::abs(w.fit.form.eval(c.v)) / w.fit.form.coeffs.norm();
}

}  // namespace kummer
