#include "kummer/terracini.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SVD>

namespace kummer {

namespace {

using Poly = std::vector<cplx>;  // coefficients in t, truncated

Poly poly_mul(const Poly& a, const Poly& b, int len) {
  Poly out(len, 0.0);
  for (int i = 0; i < len && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j < len && j < static_cast<int>(b.size()); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

MatXc scheme_matrix(const EmbeddingContext& ctx, const JetScheme& s) {
  std::map<std::array<double, 4>, MatXc> jets;
  int order = 0;
  for (const auto& r : s.rows)
    for (const auto& t : r.terms) order = std::max(order, t.i + t.j);
  MatXc M(s.length(), 9);
  for (int k = 0; k < s.length(); ++k) {
    const auto& r = s.rows[k];
    std::array<double, 4> key{r.z(0).real(), r.z(0).imag(), r.z(1).real(), r.z(1).imag()};
    auto it = jets.find(key);
    if (it == jets.end()) {
      MatXc J = ctx.theta3_jets(r.z, order);
      J /= J.col(0).norm();
      it = jets.emplace(key, J).first;
    }
    VecXc row = VecXc::Zero(9);
    for (const auto& t : r.terms) row += t.coef * it->second.col(ThetaJets::index(t.i, t.j));
    M.row(k) = row.transpose();
  }
  return M;
}

Vec2c unit(const Vec2c& t) { return t / t.norm(); }

Vec2c transverse(const Vec2c& u) { return Vec2c(-std::conj(u(1)), std::conj(u(0))); }

bool scheme_inside(const Jacobian& J, const LengthTwoScheme& z, const JacobianPoint& e) {
  if (z.reduced) return J.on_theta(e, z.a) && J.on_theta(e, z.b);
  return J.on_theta(e, z.a) && J.tangency_residual(e, z.a, J.tangent_vector(z.v)) < 1e-6;
}

std::vector<JacobianPoint> support(const LengthTwoScheme& z) {
  if (z.reduced) return {z.a, z.b};
  return {z.a};
}

constexpr double kSame = 1e-6;

}  // namespace

JetScheme& JetScheme::append(const JetScheme& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  return *this;
}

JetScheme JetScheme::point(const Vec2c& z) {
  JetScheme s;
  s.rows.push_back({z, {{1.0, 0, 0}}});
  return s;
}

JetScheme JetScheme::tangent(const Vec2c& z, const Vec2c& t) { return curvilinear(z, {t}, 2); }

JetScheme JetScheme::curvilinear(const Vec2c& z, const std::vector<Vec2c>& g, int length) {
  if (length < 1 || length > 4) throw Error(Errc::Precondition, "curvilinear length must be 1..4");
  Poly g1(length, 0.0), g2(length, 0.0);
  for (size_t d = 0; d < g.size() && static_cast<int>(d) + 1 < length; ++d) {
    g1[d + 1] = g[d](0);
    g2[d + 1] = g[d](1);
  }
  JetScheme s;
  for (int m = 0; m < length; ++m) s.rows.push_back({z, {}});
  Poly p1(length, 0.0);
  p1[0] = 1.0;
  for (int a = 0; a < length; ++a) {
    Poly p = p1;
    for (int b = 0; a + b < length; ++b) {
      for (int m = 0; m < length; ++m)
        if (p[m] != 0.0) s.rows[m].terms.push_back({p[m] / (factorial(a) * factorial(b)), a, b});
      p = poly_mul(p, g2, length);
    }
    p1 = poly_mul(p1, g1, length);
  }
  return s;
}

JetScheme JetScheme::planar(const Vec2c& z, const Vec2c& u, const Vec2c& w) {
  JetScheme s;
  s.rows.push_back({z, {{1.0, 0, 0}}});
  s.rows.push_back({z, {{u(0), 1, 0}, {u(1), 0, 1}}});
  s.rows.push_back({z, {{w(0), 1, 0}, {w(1), 0, 1}}});
  s.rows.push_back({z, {{u(0) * w(0), 2, 0}, {u(0) * w(1) + u(1) * w(0), 1, 1}, {u(1) * w(1), 0, 2}}});
  return s;
}

Separation separates(const EmbeddingContext& ctx, const JetScheme& scheme) {
  if (scheme.length() > kMaxSchemeLength) throw Error(Errc::Precondition, "scheme longer than supported");
  Separation out;
  if (scheme.length() == 0) {
    out.separated = true;
    out.ratio = 1.0;
    return out;
  }
  if (scheme.length() > 9) return out;
  MatXc M = scheme_matrix(ctx, scheme);
  Eigen::JacobiSVD<MatXc> svd(M);
  const auto& sv = svd.singularValues();
  out.ratio = sv(0) > 0.0 ? sv(scheme.length() - 1) / sv(0) : 0.0;
  out.separated = out.ratio > kSeparationTol;
  return out;
}

TerraciniVerdict terracini_two_points(const EmbeddingContext& ctx, const JacobianPoint& b, const JacobianPoint& c,
                                      const ProjPoint& p) {
  if (point_distance(b, c) < kSame) throw Error(Errc::Precondition, "points must be distinct");
  Subspace L = span({ctx.phi3(b), ctx.phi3(c)});
  if (distance_to_subspace(p, L) > 1e-6) throw Error(Errc::PointNotOnSecant, "p is not on the secant line");
  TerraciniVerdict out;
  out.point_distance = std::min(fs_distance(p, ctx.phi3(b)), fs_distance(p, ctx.phi3(c)));
  JetScheme s;
  for (const auto& z : {b.z, c.z}) {
    s.append(JetScheme::point(z));
    s.rows.push_back({z, {{1.0, 1, 0}}});
    s.rows.push_back({z, {{1.0, 0, 1}}});
  }
  Separation sep = separates(ctx, s);
  out.rank_ratio = sep.ratio;
  if (out.point_distance <= 1e-6)
    out.witness = "p is one of the two points";
  else if (!sep.separated)
    out.witness = "tangent planes meet";
  out.injective = out.witness.empty();
  return out;
}

TerraciniVerdict terracini_double_point(const EmbeddingContext& ctx, const JacobianPoint& a, const ProjPoint& v,
                                        const ProjPoint& p) {
  const Jacobian& J = ctx.jac();
  Subspace T = secant_line(ctx, LengthTwoScheme::nonreduced(a, v));
  if (distance_to_subspace(p, T) > 1e-6) throw Error(Errc::PointNotOnTangent, "p is not on the tangent line");
  TerraciniVerdict out;
  out.sampled = true;
  out.point_distance = fs_distance(p, ctx.phi3(a));
  out.rank_ratio = 1.0;
  if (out.point_distance <= 1e-6) {
    out.witness = "p is the point of tangency";
    return out;
  }
  const Vec2c u = unit(J.tangent_vector(v));
  const Vec2c w = transverse(u);
  auto probe = [&](const JetScheme& s, const std::string& name) {
    Separation sep = separates(ctx, s);
    out.rank_ratio = std::min(out.rank_ratio, sep.ratio);
    if (!sep.separated && out.witness.empty()) out.witness = name;
  };
  const double grid[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const cplx rot = std::exp(kI * (kPi / 7.0));
  for (double al : grid)
    for (double be : grid)
      probe(JetScheme::curvilinear(a.z, {u, rot * al * w, rot * be * w}, 4),
            "curvilinear (" + std::to_string(al) + ", " + std::to_string(be) + ")");
  probe(JetScheme::planar(a.z, u, w), "planar");

  // 3-jets of the two translates of the theta divisor through a tangent to v
  CurvePoint P = J.point_over(v, 0);
  const CurveSpec& C = J.curve();
  if (!P.infinite && std::abs(P.y) > 1e-6 * std::max(1.0, C.root_scale())) {
    const cplx x = P.x;
    const cplx f1 = C.deriv(x), f2 = C.deriv2(x);
    const cplx u0 = 1.0 / P.y;
    const cplx u1 = -0.5 * f1 * std::pow(u0, 3);
    const cplx u2 = -0.5 * f2 * std::pow(u0, 3) + 0.75 * f1 * f1 * std::pow(u0, 5);
    const Mat2c& Ai = J.periods().Ainv;
    Vec2c d1 = Ai * Vec2c(u0, x * u0);
    Vec2c d2 = Ai * Vec2c(u1, u0 + x * u1);
    Vec2c d3 = Ai * Vec2c(u2, 2.0 * u1 + x * u2);
    // unit-speed parameter
    const double sp = d1.norm();
    d1 /= sp;
    d2 /= sp * sp;
    d3 /= sp * sp * sp;
    probe(JetScheme::curvilinear(a.z, {d1, d2 / 2.0, d3 / 6.0}, 4), "translate curve through a");
    probe(JetScheme::curvilinear(a.z, {-d1, -d2 / 2.0, -d3 / 6.0}, 4), "involuted translate curve through a");
  }
  out.injective = out.witness.empty();
  return out;
}

const char* meeting_class_name(MeetingClass c) {
  switch (c) {
    case MeetingClass::Disjoint: return "Disjoint";
    case MeetingClass::MeetOnA: return "MeetOnA";
    case MeetingClass::MeetOffA: return "MeetOffA";
    case MeetingClass::Ambiguous: return "Ambiguous";
  }
  return "?";
}

MeetingReport classify_meeting_secants_report(const EmbeddingContext& ctx, const LengthTwoScheme& z1,
                                              const LengthTwoScheme& z2) {
  const Jacobian& J = ctx.jac();
  if (scheme_distance(z1, z2) < kSame) throw Error(Errc::Precondition, "schemes must be distinct");
  MeetingReport rep;
  LengthTwoScheme t1 = J.tau(z1), t2 = J.tau(z2);
  Subspace L1 = secant_line(ctx, t1), L2 = secant_line(ctx, t2);

  Eigen::JacobiSVD<MatXc> svd(L1.basis.adjoint() * L2.basis, Eigen::ComputeFullU | Eigen::ComputeFullV);
  VecXc q = L2.basis * svd.matrixV().col(0);
  rep.angle_sine = (q - L1.basis * (L1.basis.adjoint() * q)).norm();
  if (rep.angle_sine < 1e-6) {
    rep.point = normalize(L1.basis * svd.matrixU().col(0));
    rep.on_a_residual = ctx.coble_gradient_residual(rep.point);
    rep.observed = rep.on_a_residual < 1e-6 ? MeetingClass::MeetOnA : MeetingClass::MeetOffA;
  } else if (rep.angle_sine > 1e-3) {
    rep.observed = MeetingClass::Disjoint;
  } else {
    rep.observed = MeetingClass::Ambiguous;
  }

  // condition (1): a common translate; candidates are the supports of the two images
  std::vector<JacobianPoint> cands = support(t1);
  for (const auto& e : support(t2)) cands.push_back(e);
  for (const auto& e : cands) {
    if (!scheme_inside(J, z1, e) || !scheme_inside(J, z2, e)) continue;
    bool dup = false;
    for (const auto& f : rep.common_translates) dup = dup || is_equal(e, f, 1e-6);
    if (!dup) rep.common_translates.push_back(e);
  }
  auto same = [](const JacobianPoint& p, const JacobianPoint& q) { return point_distance(p, q) < kSame; };
  auto zero = [&](const Vec2c& z) { return torus_norm(J.periods(), z) < kSame; };
  if (!rep.common_translates.empty()) {
    rep.condition = 1;
  } else if (z1.reduced && z2.reduced) {
    const JacobianPoint* s = nullptr;
    const JacobianPoint *o1 = nullptr, *o2 = nullptr;
    int shared = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const JacobianPoint& p = i ? z1.b : z1.a;
        const JacobianPoint& q = j ? z2.b : z2.a;
        if (same(p, q)) {
          ++shared;
          s = &p;
          o1 = i ? &z1.a : &z1.b;
          o2 = j ? &z2.a : &z2.b;
        }
      }
    if (shared == 1 && !same(*o1, *o2) && zero(s->z + o1->z + o2->z)) rep.condition = 2;
  } else if (z1.reduced != z2.reduced) {
    const LengthTwoScheme& r = z1.reduced ? z1 : z2;
    const LengthTwoScheme& n = z1.reduced ? z2 : z1;
    for (int i = 0; i < 2; ++i) {
      const JacobianPoint& s = i ? r.b : r.a;
      const JacobianPoint& o = i ? r.a : r.b;
      if (same(s, n.a) && zero(2.0 * s.z + o.z)) rep.condition = 3;
    }
  } else {
    if (same(z1.a, z2.a) && fs_distance(z1.v, z2.v) > kSame && zero(3.0 * z1.a.z)) rep.condition = 4;
  }
  rep.predicted = rep.condition == 0 ? MeetingClass::Disjoint
                  : rep.condition == 1 ? MeetingClass::MeetOnA
                                       : MeetingClass::MeetOffA;
  return rep;
}

MeetingReport classify_meeting_secants(const EmbeddingContext& ctx, const LengthTwoScheme& z1,
                                       const LengthTwoScheme& z2) {
  MeetingReport rep = classify_meeting_secants_report(ctx, z1, z2);
  if (!rep.agree())
    throw Error(Errc::ClassificationMismatch, std::string("observed ") + meeting_class_name(rep.observed) +
                                                  ", predicted " + meeting_class_name(rep.predicted));
  return rep;
}

FiberReport fiber_over_N_report(const EmbeddingContext& ctx, const KummerTriple& xi, int pool, std::uint64_t seed) {
  if (!xi.reduced) throw Error(Errc::Precondition, "fiber count needs a reduced triple");
  if (xi.min_separation() < 1e-2) throw Error(Errc::Precondition, "triple is too close to the diagonal");
  const Jacobian& J = ctx.jac();
  ProjPoint p = phi_D(ctx, xi);
  std::vector<LengthTwoScheme> pairs = {J.tau(LengthTwoScheme::pair(xi.a, xi.b)),
                                        J.tau(LengthTwoScheme::pair(xi.a, xi.c)),
                                        J.tau(LengthTwoScheme::pair(xi.b, xi.c))};
  FiberReport rep;
  std::vector<Subspace> lines;
  for (const auto& t : pairs) {
    lines.push_back(secant_line(ctx, t));
    double d = distance_to_subspace(p, lines.back());
    rep.worst_on = std::max(rep.worst_on, d);
    if (d < 1e-6) ++rep.count;
  }
  rep.min_line_separation = std::min({subspace_distance(lines[0], lines[1]), subspace_distance(lines[0], lines[2]),
                                      subspace_distance(lines[1], lines[2])});
  std::mt19937_64 rng(seed);
  int drawn = 0;
  while (drawn < pool) {
    LengthTwoScheme z = LengthTwoScheme::pair(J.random_point(rng), J.random_point(rng));
    bool near = false;
    for (const auto& t : pairs) near = near || scheme_distance(z, t) < 0.1;
    if (near) continue;
    ++drawn;
    double d = distance_to_subspace(p, secant_line(ctx, z));
    rep.closest_other = std::min(rep.closest_other, d);
    if (d <= 1e-3) ++rep.count;
  }
  return rep;
}

int fiber_over_N(const EmbeddingContext& ctx, const KummerTriple& xi, int pool, std::uint64_t seed) {
  FiberReport rep = fiber_over_N_report(ctx, xi, pool, seed);
  if (rep.count != 3) throw Error(Errc::UnexpectedIncidence, "point lies on " + std::to_string(rep.count) + " secants");
  return rep.count;
}

TranslateQuadruple translate_quadruple(const Jacobian& J, std::mt19937_64& rng) {
  TranslateQuadruple q;
  std::vector<Vec2c> al;
  Vec2c sum = Vec2c::Zero();
  for (int i = 0; i < 4; ++i) {
    al.push_back(J.alpha_unreduced(J.random_curve_point(rng)));
    sum += al.back();
  }
  const Vec2c a = -sum / 3.0;
  q.a = J.point(a);
  for (const auto& x : al) q.points.push_back(J.point(a + x));
  return q;
}

}  // namespace kummer
