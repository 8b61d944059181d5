#include "kummer/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kummer {

namespace {

void check_same(const JacobianPoint& p, const JacobianPoint& q) {
  if (p.pd != q.pd) throw Error(Errc::MixedPeriodData, "points refer to different period data");
}

bool lex_less(const Vec2c& x, const Vec2c& y) {
  const double vx[4] = {x(0).real(), x(0).imag(), x(1).real(), x(1).imag()};
  const double vy[4] = {y(0).real(), y(0).imag(), y(1).real(), y(1).imag()};
  for (int i = 0; i < 4; ++i)
    if (vx[i] != vy[i]) return vx[i] < vy[i];
  return false;
}

}  // namespace

JacobianPoint add(const JacobianPoint& p, const JacobianPoint& q) {
  check_same(p, q);
  return make_point(*p.pd, p.z + q.z);
}

JacobianPoint sub(const JacobianPoint& p, const JacobianPoint& q) {
  check_same(p, q);
  return make_point(*p.pd, p.z - q.z);
}

JacobianPoint neg(const JacobianPoint& p) { return make_point(*p.pd, -p.z); }

JacobianPoint scale(const JacobianPoint& p, int k) { return make_point(*p.pd, double(k) * p.z); }

double point_distance(const JacobianPoint& p, const JacobianPoint& q) {
  check_same(p, q);
  return torus_norm(*p.pd, p.z - q.z);
}

bool is_equal(const JacobianPoint& p, const JacobianPoint& q, double tol) { return point_distance(p, q) < tol; }

JacobianPoint torsion_point(const PeriodData& pd, int n, int i, int j, int k, int l) {
  Vec2c z = (double(i) * pd.Omega.col(0) + double(j) * pd.Omega.col(1) + Vec2c(double(k), double(l))) / double(n);
  return make_point(pd, z);
}

std::vector<JacobianPoint> torsion_points(const PeriodData& pd, int n) {
  if (n < 1) throw Error(Errc::Precondition, "torsion order must be positive");
  std::vector<JacobianPoint> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out.push_back(torsion_point(pd, n, i, j, k, l));
  return out;
}

LengthTwoScheme LengthTwoScheme::pair(const JacobianPoint& a, const JacobianPoint& b) {
  check_same(a, b);
  LengthTwoScheme s;
  s.reduced = true;
  if (lex_less(b.z, a.z)) {
    s.a = b;
    s.b = a;
  } else {
    s.a = a;
    s.b = b;
  }
  return s;
}

LengthTwoScheme LengthTwoScheme::nonreduced(const JacobianPoint& a, const ProjPoint& v) {
  LengthTwoScheme s;
  s.reduced = false;
  s.a = a;
  s.b = a;
  s.v = normalize(v.v);
  return s;
}

JacobianPoint LengthTwoScheme::sum() const { return reduced ? add(a, b) : scale(a, 2); }

double scheme_distance(const LengthTwoScheme& s, const LengthTwoScheme& t) {
  if (s.reduced != t.reduced) return std::numeric_limits<double>::infinity();
  if (!s.reduced) return std::max(point_distance(s.a, t.a), fs_distance(s.v, t.v));
  double m1 = std::max(point_distance(s.a, t.a), point_distance(s.b, t.b));
  double m2 = std::max(point_distance(s.a, t.b), point_distance(s.b, t.a));
  return std::min(m1, m2);
}

Jacobian::Jacobian(const CurveSpec& curve, const PeriodData& pd) : curve_(curve), pd_(pd), charts_(curve) {
  std::vector<double> vals;
  for (int k = 0; k < 32; ++k) {
    double t1 = std::fmod(0.618034 * (k + 1), 1.0) - 0.5, t2 = std::fmod(0.754878 * (k + 1), 1.0) - 0.5;
    double t3 = std::fmod(0.569840 * (k + 1), 1.0) - 0.5, t4 = std::fmod(0.438579 * (k + 1), 1.0) - 0.5;
    Vec2c z = Vec2c(t1, t2) + pd_.Omega * Vec2c(t3, t4);
    vals.push_back(theta_normalized_modulus(theta(pd_.delta, z, pd_.Omega), z, pd_.Omega));
  }
  std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
  theta_scale_ = vals[vals.size() / 2];

  // Fibonacci sphere pulled back by stereographic projection, scaled to the branch points.
  const int N = 640;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double R0 = curve_.root_scale();
  for (int k = 0; k < N; ++k) {
    double zc = 1.0 - (2.0 * k + 1.0) / N;
    double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    cplx x = R0 * rho * std::exp(kI * (golden * k)) / (1.0 - zc);
    CurvePoint cp = lift(curve_, x, 0);
    GridNode g;
    g.point = charts_.from_curve_point(cp);
    g.alpha = *abel_jacobi_unreduced(charts_, pd_, charts_.to_curve_point(g.point));
    grid_.push_back(g);
  }
  const int M = 12;
  for (int k = 0; k < M; ++k) {
    double zc = 1.0 - (2.0 * k + 1.0) / M;
    double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    cplx x = 0.9 * R0 * rho * std::exp(kI * (golden * k + 0.3)) / (1.0 - zc);
    CurvePoint cp = lift(curve_, x, k % 2);
    samples_.push_back(cp);
    sample_alphas_.push_back(*abel_jacobi_unreduced(charts_, pd_, cp));
  }
}

JacobianPoint Jacobian::alpha(const CurvePoint& p) const { return point(alpha_unreduced(p)); }

Vec2c Jacobian::alpha_unreduced(const CurvePoint& p) const { return *abel_jacobi_unreduced(charts_, pd_, p); }

Vec2c Jacobian::alpha_derivative(const CurvePoint& p) const {
  if (p.infinite) throw Error(Errc::Precondition, "alpha_derivative needs an affine point");
  return pd_.Ainv * Vec2c(1.0 / p.y, p.x / p.y);
}

Vec2c Jacobian::tangent_vector(const ProjPoint& v) const { return pd_.Ainv * Vec2c(v.v(0), v.v(1)); }

CurvePoint Jacobian::point_over(const ProjPoint& v, int sheet) const {
  if (std::abs(v.v(0)) <= 1e-12 * v.v.norm()) {
    CurvePoint p = CurvePoint::at_infinity(0);
    return sheet == 0 ? p : involute(curve_, p);
  }
  cplx x = v.v(1) / v.v(0);
  for (auto r : curve_.roots)
    if (std::abs(x - r) <= 1e-12 * (1.0 + std::abs(r))) return CurvePoint::affine(r, 0.0);
  return lift(curve_, x, sheet);
}

double Jacobian::theta_residual(const Vec2c& w) const {
  Vec2c wr = reduce_vector(pd_, w);
  return theta_normalized_modulus(theta(pd_.delta, wr, pd_.Omega), wr, pd_.Omega) / theta_scale_;
}

bool Jacobian::on_theta(const JacobianPoint& a, const JacobianPoint& w, double tol) const {
  return theta_residual(w.z - a.z) < tol;
}

double Jacobian::tangency_residual(const JacobianPoint& a, const JacobianPoint& w, const Vec2c& t) const {
  Vec2c wr = reduce_vector(pd_, w.z - a.z);
  ThetaJets j = theta_jets(pd_.delta, wr, pd_.Omega, 1);
  Vec2c grad(j(1, 0), j(0, 1));
  double weight = theta_gaussian_weight(wr, pd_.Omega);
  return std::abs(grad.dot(t.conjugate())) * weight / (theta_scale_ * t.norm() * 2.0 * kPi);
}

ChartPoint Jacobian::involute_chart(const ChartPoint& p) const {
  ChartPoint q = p;
  q.r = -p.r;
  return q;
}

bool Jacobian::newton(const Vec2c& d, ChartPoint p, Vec2c alpha, RootInfo* out) const {
  Vec2c w0 = alpha + d;
  Vec2c lambda = reduce_vector(pd_, w0) - w0;
  auto eval = [&](const Vec2c& al, cplx* g, Vec2c* grad) {
    Vec2c w = al + d + lambda;
    ThetaJets j = theta_jets(pd_.delta, w, pd_.Omega, 1);
    *g = j.value();
    *grad = Vec2c(j(1, 0), j(0, 1));
    return theta_gaussian_weight(w, pd_.Omega);
  };
  cplx g;
  Vec2c grad;
  double wgt = eval(alpha, &g, &grad);
  double res = std::abs(g) * wgt / theta_scale_;
  for (int it = 0; it < 60; ++it) {
    Vec2c T = pd_.Ainv * charts_.raw_differential(p);
    cplx gp = grad(0) * T(0) + grad(1) * T(1);
    if (std::abs(gp) == 0.0) break;
    cplx ds = -g / gp;
    double lim = 0.5 * charts_.singular_distance(p);
    if (p.kind == ChartKind::Affine) lim = std::min(lim, 0.5 * curve_.root_scale());
    if (std::abs(ds) > lim) ds *= lim / std::abs(ds);
    bool accepted = false;
    for (int half = 0; half < 12; ++half) {
      ChartPoint q;
      Vec2c al = alpha + pd_.Ainv * charts_.integrate_segment(p, p.s + ds, &q, 16);
      cplx g2;
      Vec2c grad2;
      double w2 = eval(al, &g2, &grad2);
      double res2 = std::abs(g2) * w2 / theta_scale_;
      if (res2 < res || res2 < 1e-15) {
        p = charts_.preferred(q);
        alpha = al;
        g = g2;
        grad = grad2;
        res = res2;
        accepted = true;
        break;
      }
      ds *= 0.5;
    }
    if (!accepted || std::abs(ds) < 1e-15 * (1.0 + std::abs(p.s))) break;
  }
  Vec2c T = pd_.Ainv * charts_.raw_differential(p);
  out->point = p;
  out->alpha = alpha;
  out->residual = res;
  out->transversality = std::abs(grad(0) * T(0) + grad(1) * T(1)) / std::max(grad.norm() * T.norm(), 1e-300);
  return res < 1e-8;
}

bool Jacobian::refine_double(const Vec2c& target, RootInfo* r) const {
  // Gauss-Newton on 2 alpha(x) = target mod Lambda
  Vec2c F0 = 2.0 * r->alpha - target;
  Vec2c lambda = F0 - reduce_vector(pd_, F0);
  ChartPoint p = r->point;
  Vec2c alpha = r->alpha;
  double best = (2.0 * alpha - target - lambda).norm();
  for (int it = 0; it < 40; ++it) {
    Vec2c F = 2.0 * alpha - target - lambda;
    Vec2c Jc = 2.0 * (pd_.Ainv * charts_.raw_differential(p));
    cplx ds = -Jc.dot(F) / Jc.squaredNorm();
    double lim = 0.5 * charts_.singular_distance(p);
    if (std::abs(ds) > lim) ds *= lim / std::abs(ds);
    ChartPoint q;
    Vec2c al = alpha + pd_.Ainv * charts_.integrate_segment(p, p.s + ds, &q, 16);
    double nf = (2.0 * al - target - lambda).norm();
    if (nf > best && it > 0) break;
    best = nf;
    p = charts_.preferred(q);
    alpha = al;
    if (std::abs(ds) < 1e-15 * (1.0 + std::abs(p.s))) break;
  }
  r->point = p;
  r->alpha = alpha;
  return best < 1e-9;
}

LengthTwoScheme Jacobian::theta_intersection(const JacobianPoint& a, const JacobianPoint& b,
                                             IntersectionDiagnostics* diag) const {
  if (point_distance(a, b) < 1e-8) throw Error(Errc::CoincidentDivisors, "a and b coincide");
  Vec2c d = reduce_vector(pd_, a.z - b.z);
  struct Cand {
    double val;
    int node;
    int sheet;
  };
  std::vector<Cand> cands;
  cands.reserve(2 * grid_.size());
  for (size_t k = 0; k < grid_.size(); ++k) {
    for (int sh = 0; sh < 2; ++sh) {
      Vec2c al = sh == 0 ? grid_[k].alpha : Vec2c(-grid_[k].alpha);
      cands.push_back({theta_residual(al + d), static_cast<int>(k), sh});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.val != y.val) return x.val < y.val;
    if (x.node != y.node) return x.node < y.node;
    return x.sheet < y.sheet;
  });

  std::vector<RootInfo> roots;
  auto known = [&](const Vec2c& al) {
    for (const auto& r : roots)
      if (torus_norm(pd_, r.alpha - al) < 1e-5) return true;
    return false;
  };
  std::vector<Vec2c> tried;
  const size_t max_seeds = 24;
  for (size_t c = 0; c < cands.size() && tried.size() < max_seeds; ++c) {
    const auto& node = grid_[cands[c].node];
    Vec2c al = cands[c].sheet == 0 ? node.alpha : Vec2c(-node.alpha);
    bool close = false;
    for (const auto& t : tried)
      if (torus_norm(pd_, t - al) < 0.02) close = true;
    if (close) continue;
    tried.push_back(al);
    ChartPoint p = cands[c].sheet == 0 ? node.point : involute_chart(node.point);
    RootInfo r;
    if (newton(d, p, al, &r) && !known(r.alpha)) roots.push_back(r);
    bool have_double = roots.size() == 1 && roots[0].transversality < 1e-4;
    if (roots.size() >= 2 || (have_double && tried.size() >= 8)) break;
  }
  IntersectionDiagnostics dg;
  dg.roots_found = static_cast<int>(roots.size());
  for (const auto& r : roots) {
    dg.worst_residual = std::max(dg.worst_residual, r.residual);
    dg.min_transversality = std::min(dg.min_transversality, r.transversality);
  }
  LengthTwoScheme out;
  bool dbl = !roots.empty() && (roots.size() == 1 || torus_norm(pd_, roots[0].alpha - roots[1].alpha) < 1e-5) &&
             roots[0].transversality < 1e-4;
  if (dbl) {
    RootInfo r = roots[0];
    Vec2c target = reduce_vector(pd_, b.z - a.z);
    if (!refine_double(target, &r)) throw Error(Errc::RootCountMismatch, "double root did not refine");
    dg.double_root = true;
    CurvePoint x = charts_.to_curve_point(r.point);
    out = LengthTwoScheme::nonreduced(point(r.alpha + a.z), canonical_map(x));
  } else if (roots.size() >= 2) {
    std::sort(roots.begin(), roots.end(), [](const RootInfo& x, const RootInfo& y) { return x.residual < y.residual; });
    out = LengthTwoScheme::pair(point(roots[0].alpha + a.z), point(roots[1].alpha + a.z));
  } else {
    if (diag) *diag = dg;
    throw Error(Errc::RootCountMismatch, "found " + std::to_string(roots.size()) + " roots");
  }
  if (diag) *diag = dg;
  return out;
}

LengthTwoScheme Jacobian::tau(const LengthTwoScheme& z, IntersectionDiagnostics* diag) const {
  if (z.reduced) return theta_intersection(z.a, z.b, diag);
  CurvePoint p = point_over(z.v, 0);
  if (is_weierstrass(curve_, p, 1e-10)) return LengthTwoScheme::nonreduced(add(alpha(p), z.a), canonical_map(p));
  JacobianPoint al = alpha(p);
  return LengthTwoScheme::pair(add(al, z.a), sub(z.a, al));
}

JacobianPoint Jacobian::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::Vector4d t(u(rng), u(rng), u(rng), u(rng));
  return point(lattice_vector(pd_, t));
}

CurvePoint Jacobian::random_curve_point(std::mt19937_64& rng, bool allow_near_weierstrass) const {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> sheet(0, 1);
  const double R0 = curve_.root_scale();
  for (;;) {
    cplx x = R0 * cplx(g(rng), g(rng));
    int sh = sheet(rng);
    if (!allow_near_weierstrass) {
      bool near = false;
      for (auto r : curve_.roots)
        if (std::abs(x - r) < 0.05 * R0) near = true;
      if (near) continue;
    }
    return lift(curve_, x, sh);
  }
}

}  // namespace kummer
