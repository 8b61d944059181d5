#include "kummer/periods.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace kummer {

void PeriodData::finalize() {
  Y = Omega.imag();
  Yinv = Y.inverse();
  Ainv = A.inverse();
}

Eigen::Vector4d lattice_coords(const PeriodData& pd, const Vec2c& z) {
  Eigen::Vector2d k = pd.Yinv * z.imag();
  Eigen::Vector2d n = z.real() - pd.Omega.real() * k;
  Eigen::Vector4d out;
  out << n, k;
  return out;
}

Vec2c lattice_vector(const PeriodData& pd, const Eigen::Vector4d& nk) {
  Vec2c n(nk(0), nk(1));
  Vec2c k(nk(2), nk(3));
  return n + pd.Omega * k;
}

Vec2c reduce_vector(const PeriodData& pd, const Vec2c& z) {
  Vec2c w = z;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::Vector4d t = lattice_coords(pd, w);
    Eigen::Vector4d r;
    bool again = false;
    for (int i = 0; i < 4; ++i) {
      r(i) = std::floor(t(i) + 0.5);
      if (std::abs(t(i) - r(i)) > 0.5 - 1e-6) again = true;
    }
    w -= lattice_vector(pd, r);
    if (!again) break;
  }
  return w;
}

double torus_norm(const PeriodData& pd, const Vec2c& z) { return reduce_vector(pd, z).norm(); }

JacobianPoint make_point(const PeriodData& pd, const Vec2c& z) { return JacobianPoint{reduce_vector(pd, z), &pd}; }

namespace {

ChartPoint affine_point(cplx x, cplx y) {
  ChartPoint p;
  p.kind = ChartKind::Affine;
  p.s = x;
  p.r = y;
  return p;
}

cplx unit(cplx v, cplx fallback) {
  double m = std::abs(v);
  return m > 0.0 ? v / m : fallback;
}

// Leave the chart containing `from` toward x-coordinate `toward`, ending in the affine chart.
Vec2c leave_chart(const CurveCharts& ch, const ChartPoint& from, cplx toward, ChartPoint* out, int order) {
  if (from.kind == ChartKind::Affine) {
    *out = from;
    return Vec2c::Zero();
  }
  const cplx dflt(0.6, 0.8);
  cplx xe;
  cplx se;
  if (from.kind == ChartKind::Branch) {
    cplx w = ch.curve().roots[from.branch];
    xe = w + ch.branch_radius(from.branch) * unit(toward - w, dflt);
    se = std::sqrt(xe - w);
    // stay on the representative nearest the current parameter
    if (std::abs(from.s) > 0.0 && std::abs(-se - from.s) < std::abs(se - from.s)) se = -se;
  } else {
    double R = ch.infinity_radius();
    xe = R * unit(toward, dflt);
    se = ch.curve().degree == 6 ? 1.0 / xe : 1.0 / std::sqrt(xe);
    if (ch.curve().degree == 5 && std::abs(from.s) > 0.0 && std::abs(-se - from.s) < std::abs(se - from.s)) se = -se;
  }
  ChartPoint mid;
  Vec2c raw = ch.integrate_segment(from, se, &mid, order);
  *out = ch.convert(mid, ChartKind::Affine, -1);
  return raw;
}

// Affine polygon around a single branch point, starting and ending at the current point's projection.
Vec2c circle_branch(const CurveCharts& ch, const ChartPoint& from, int k, ChartPoint* out, int order) {
  const auto& e = ch.curve().roots;
  double dmin = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < e.size(); ++j)
    if (static_cast<int>(j) != k) dmin = std::min(dmin, std::abs(e[j] - e[k]));
  double rl = 0.3 * dmin;
  cplx dir = unit(from.s - e[k], cplx(1.0, 0.0));
  ChartPoint cur;
  Vec2c raw = ch.integrate_with_detours(from, e[k] + rl * dir, &cur, order);
  const int K = 12;
  for (int i = 1; i <= K; ++i) {
    cplx v = e[k] + rl * dir * std::exp(kI * (2.0 * kPi * i / K));
    ChartPoint nxt;
    raw += ch.integrate_segment(cur, v, &nxt, order);
    cur = nxt;
  }
  *out = cur;
  return raw;
}

bool same_root(cplx got, cplx want) { return std::abs(got - want) <= std::abs(got + want); }

}  // namespace

std::optional<Vec2c> abel_jacobi_raw(const CurveCharts& ch, const CurvePoint& p, const AbelJacobiOptions& opts) {
  const CurveSpec& curve = ch.curve();
  ChartPoint base = ch.from_curve_point(eta_point(curve));
  ChartPoint tgt = ch.from_curve_point(p);
  const int order = opts.order;
  Vec2c raw = Vec2c::Zero();
  ChartPoint end;

  bool tgt_center = tgt.kind != ChartKind::Affine && std::abs(tgt.s) == 0.0;
  bool same_chart = tgt.kind == base.kind && tgt.branch == base.branch;
  if (same_chart && opts.loop_branch < 0) {
    if (tgt_center) return Vec2c::Zero();
    raw = ch.integrate_segment(base, tgt.s, &end, order);
  } else {
    cplx toward;
    if (tgt.kind == ChartKind::Affine) {
      toward = tgt.s;
    } else if (tgt.kind == ChartKind::Branch) {
      toward = curve.roots[tgt.branch];
    } else {
      toward = ch.infinity_radius() * cplx(std::cos(0.1234), std::sin(0.1234));
      if (!tgt_center) toward = ch.x_of(tgt.kind, tgt.branch, tgt.s);
    }
    ChartPoint cur;
    raw = leave_chart(ch, base, toward, &cur, order);
    if (opts.loop_branch >= 0) {
      ChartPoint nxt;
      raw += circle_branch(ch, cur, opts.loop_branch, &nxt, order);
      cur = nxt;
    }
    if (tgt.kind == ChartKind::Affine) {
      raw += ch.integrate_with_detours(cur, tgt.s, &end, order);
    } else if (tgt.kind == ChartKind::Branch) {
      cplx w = curve.roots[tgt.branch];
      cplx xin = w + ch.branch_radius(tgt.branch) * unit(cur.s - w, cplx(0.6, 0.8));
      ChartPoint at;
      raw += ch.integrate_with_detours(cur, xin, &at, order);
      ChartPoint inb = ch.convert(at, ChartKind::Branch, tgt.branch);
      ChartPoint t2 = tgt;
      if (!tgt_center && std::abs(-tgt.s - inb.s) < std::abs(tgt.s - inb.s)) {
        t2.s = -tgt.s;
        t2.r = -tgt.r;
      }
      raw += ch.integrate_segment(inb, t2.s, &end, order);
      tgt = t2;
    } else {
      cplx xin = ch.infinity_radius() * unit(tgt_center ? cur.s : ch.x_of(tgt.kind, tgt.branch, tgt.s), cplx(1.0, 0.0));
      if (tgt_center) xin = ch.infinity_radius() * unit(toward, cplx(1.0, 0.0));
      ChartPoint at;
      raw += ch.integrate_with_detours(cur, xin, &at, order);
      ChartPoint inf = ch.convert(at, ChartKind::Infinity, -1);
      ChartPoint t2 = tgt;
      if (curve.degree == 5 && !tgt_center && std::abs(-tgt.s - inf.s) < std::abs(tgt.s - inf.s)) {
        t2.s = -tgt.s;
        t2.r = -tgt.r;
      }
      raw += ch.integrate_segment(inf, t2.s, &end, order);
      tgt = t2;
    }
  }
  bool sheet_free = tgt.kind != ChartKind::Affine && std::abs(tgt.s) == 0.0 &&
                    !(tgt.kind == ChartKind::Infinity && curve.degree == 6);
  if (sheet_free || same_root(end.r, tgt.r)) return raw;
  if (!opts.allow_negation) return std::nullopt;
  return Vec2c(-raw);
}

std::optional<Vec2c> abel_jacobi_unreduced(const CurveCharts& charts, const PeriodData& pd, const CurvePoint& p,
                                           const AbelJacobiOptions& opts) {
  auto raw = abel_jacobi_raw(charts, p, opts);
  if (!raw) return std::nullopt;
  return Vec2c(pd.Ainv * (*raw));
}

JacobianPoint abel_jacobi(const CurveSpec& curve, const PeriodData& pd, const CurvePoint& p) {
  CurveCharts charts(curve);
  auto z = abel_jacobi_unreduced(charts, pd, p);
  return make_point(pd, *z);
}

namespace {

struct Loop {
  std::vector<cplx> vertices;  // closed polygon, last vertex not repeated
  std::vector<cplx> roots;     // continued y at each vertex
};

double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

std::vector<Loop> chain_loops(const CurveCharts& ch, double radius_factor) {
  const auto& e = ch.curve().roots;
  std::vector<Loop> loops;
  for (int i = 0; i < 4; ++i) {
    cplx p = e[i], q = e[i + 1];
    double dmin = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < e.size(); ++j) {
      if (static_cast<int>(j) == i || static_cast<int>(j) == i + 1) continue;
      dmin = std::min(dmin, point_segment_distance(e[j], p, q));
    }
    dmin = std::min(dmin, std::abs(q - p));
    double r = radius_factor * dmin * (1.0 - 0.08 * i);
    cplx d = (q - p) / std::abs(q - p);
    const int K = 16;
    Loop L;
    for (int k = 0; k <= K; ++k) L.vertices.push_back(q + r * d * std::exp(kI * (-kPi / 2 + kPi * k / K)));
    for (int k = 0; k <= K; ++k) L.vertices.push_back(p + r * d * std::exp(kI * (kPi / 2 + kPi * k / K)));
    loops.push_back(std::move(L));
  }
  return loops;
}

cplx walk_root(const CurveCharts& ch, cplx s0, cplx r0, cplx s1) {
  cplx cur = s0, r = r0;
  const auto& sing = ch.singularities(ChartKind::Affine, -1);
  int guard = 0;
  while (std::abs(s1 - cur) > 0.0) {
    double d = std::numeric_limits<double>::infinity();
    for (auto s : sing) d = std::min(d, std::abs(cur - s));
    double L = std::abs(s1 - cur);
    double step = std::min(L, 0.05 * d);
    cplx nxt = step >= L ? s1 : cur + (s1 - cur) / L * step;
    r = ch.continue_root(ChartKind::Affine, -1, nxt, r);
    cur = nxt;
    if (++guard > 1000000) throw Error(Errc::PathThroughBranchPoint, "root continuation stalled");
  }
  return r;
}

void fill_vertex_roots(const CurveCharts& ch, Loop& L) {
  L.roots.resize(L.vertices.size());
  L.roots[0] = std::sqrt(ch.curve().eval(L.vertices[0]));
  for (size_t k = 1; k < L.vertices.size(); ++k)
    L.roots[k] = walk_root(ch, L.vertices[k - 1], L.roots[k - 1], L.vertices[k]);
  cplx back = walk_root(ch, L.vertices.back(), L.roots.back(), L.vertices[0]);
  if (!same_root(back, L.roots[0])) throw Error(Errc::QuadratureNotConverged, "chain loop does not close");
}

}  // namespace

std::vector<Vec2c> chain_loop_integrals(const CurveCharts& ch, int order, double radius_factor) {
  auto loops = chain_loops(ch, radius_factor);
  std::vector<Vec2c> out;
  for (auto& L : loops) {
    ChartPoint cur = affine_point(L.vertices[0], std::sqrt(ch.curve().eval(L.vertices[0])));
    cplx r0 = cur.r;
    Vec2c total = Vec2c::Zero();
    for (size_t k = 1; k <= L.vertices.size(); ++k) {
      cplx v = L.vertices[k % L.vertices.size()];
      ChartPoint nxt;
      total += ch.integrate_segment(cur, v, &nxt, order);
      cur = nxt;
    }
    if (!same_root(cur.r, r0)) throw Error(Errc::QuadratureNotConverged, "chain loop does not close");
    out.push_back(total);
  }
  return out;
}

Eigen::Matrix4i chain_intersection_matrix(const CurveCharts& ch, double radius_factor) {
  auto loops = chain_loops(ch, radius_factor);
  for (auto& L : loops) fill_vertex_roots(ch, L);
  Eigen::Matrix4i E = Eigen::Matrix4i::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Loop& P = loops[i];
      const Loop& Q = loops[j];
      int count = 0;
      const size_t np = P.vertices.size(), nq = Q.vertices.size();
      for (size_t a = 0; a < np; ++a) {
        cplx p0 = P.vertices[a], p1 = P.vertices[(a + 1) % np];
        cplx dp = p1 - p0;
        for (size_t b = 0; b < nq; ++b) {
          cplx q0 = Q.vertices[b], q1 = Q.vertices[(b + 1) % nq];
          cplx dq = q1 - q0;
          double den = (std::conj(dp) * dq).imag();
          if (std::abs(den) < 1e-300) continue;
          cplx w = q0 - p0;
          double t = (std::conj(w) * dq).imag() / den;
          double u = (std::conj(w) * dp).imag() / den;
          if (t < 0.0 || t >= 1.0 || u < 0.0 || u >= 1.0) continue;
          cplx X = p0 + t * dp;
          cplx yp = walk_root(ch, p0, P.roots[a], X);
          cplx yq = walk_root(ch, q0, Q.roots[b], X);
          if (std::abs(yp - yq) > std::abs(yp + yq)) continue;
          count += den > 0.0 ? 1 : -1;
        }
      }
      E(i, j) = count;
      E(j, i) = -count;
    }
  }
  return E;
}

Eigen::Matrix4i symplectic_reduction(const Eigen::Matrix4i& E) {
  std::vector<Eigen::Vector4i> cand;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          if (!a && !b && !c && !d) continue;
          cand.emplace_back(a, b, c, d);
        }
  std::stable_sort(cand.begin(), cand.end(), [](const Eigen::Vector4i& x, const Eigen::Vector4i& y) {
    return x.cwiseAbs().sum() < y.cwiseAbs().sum();
  });
  auto form = [&](const Eigen::Vector4i& x, const Eigen::Vector4i& y) { return x.dot(E * y); };
  Eigen::Matrix4i J = Eigen::Matrix4i::Zero();
  J(0, 2) = J(1, 3) = 1;
  J(2, 0) = J(3, 1) = -1;
  for (const auto& e1 : cand)
    for (const auto& f1 : cand) {
      if (form(e1, f1) != 1) continue;
      for (const auto& e2 : cand) {
        if (form(e2, e1) != 0 || form(e2, f1) != 0) continue;
        for (const auto& f2 : cand) {
          if (form(f2, e1) != 0 || form(f2, f1) != 0 || form(e2, f2) != 1) continue;
          Eigen::Matrix4i S;
          S.row(0) = e1.transpose();
          S.row(1) = e2.transpose();
          S.row(2) = f1.transpose();
          S.row(3) = f2.transpose();
          if (std::abs(std::lround(S.cast<double>().determinant())) != 1) continue;
          if (S * E * S.transpose() == J) return S;
        }
      }
    }
  throw Error(Errc::IllConditionedPeriods, "intersection form of the chain loops is not unimodular");
}

namespace {

double theta_scale(const ThetaChar& ch, const Mat2c& Omega) {
  std::vector<double> vals;
  for (int k = 0; k < 24; ++k) {
    double t1 = std::fmod(0.618034 * (k + 1), 1.0) - 0.5, t2 = std::fmod(0.754878 * (k + 1), 1.0) - 0.5;
    double t3 = std::fmod(0.569840 * (k + 1), 1.0) - 0.5, t4 = std::fmod(0.438579 * (k + 1), 1.0) - 0.5;
    Vec2c z = Vec2c(t1, t2) + Omega * Vec2c(t3, t4);
    vals.push_back(theta_normalized_modulus(theta(ch, z, Omega), z, Omega));
  }
  std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
  return vals[vals.size() / 2];
}

}  // namespace

PeriodData compute_periods(const CurveSpec& curve, double precision_target, const PeriodOptions& opts) {
  CurveCharts ch(curve);
  auto coarse = chain_loop_integrals(ch, opts.order, opts.loop_radius_factor);
  auto fine = chain_loop_integrals(ch, 2 * opts.order, opts.loop_radius_factor);
  double change = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 2; ++k)
      change = std::max(change, std::abs(coarse[j](k) - fine[j](k)) / std::max(1.0, std::abs(fine[j](k))));
  if (change > precision_target)
    throw Error(Errc::QuadratureNotConverged, "refinement changed periods by " + std::to_string(change));

  Eigen::Matrix4i E = chain_intersection_matrix(ch, opts.loop_radius_factor);
  Eigen::Matrix4i S = symplectic_reduction(E);

  Mat2c A, B;
  for (int i = 0; i < 2; ++i) {
    Vec2c a = Vec2c::Zero(), b = Vec2c::Zero();
    for (int j = 0; j < 4; ++j) {
      a += double(S(i, j)) * fine[j];
      b += double(S(2 + i, j)) * fine[j];
    }
    A.col(i) = a;
    B.col(i) = b;
  }
  Eigen::JacobiSVD<Mat2c> svd(A);
  double cond = svd.singularValues()(0) / svd.singularValues()(1);
  if (!(cond <= 1e8)) throw Error(Errc::IllConditionedPeriods, "cond(A) = " + std::to_string(cond));

  PeriodData pd;
  pd.A = A;
  pd.B = B;
  pd.Omega = A.inverse() * B;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Eigen::Matrix2d(pd.Omega.imag()));
  if (es.eigenvalues()(1) < 0.0) {
    pd.B = -B;
    S.bottomRows(2) *= -1;
    pd.Omega = -pd.Omega;
  }
  if ((pd.Omega - pd.Omega.transpose()).norm() > 1e-6)
    throw Error(Errc::IllConditionedPeriods, "period matrix is not symmetric");
  es.compute(Eigen::Matrix2d(pd.Omega.imag()));
  if (!(es.eigenvalues()(0) > 1e-6)) throw Error(Errc::IllConditionedPeriods, "Im Omega is not positive definite");
  pd.cycle_basis = S;
  pd.intersection = E;
  pd.quadrature_order = 2 * opts.order;
  pd.refinements = 1;
  pd.precision_target = precision_target;
  pd.refinement_change = change;
  pd.curve_hash = curve_hash(curve);
  pd.shift_convention = "theta[frac(d1 + s/n), frac(n d2)](n z, n Omega)";
  pd.finalize();

  // identify the odd characteristic whose zero set is alpha(C)
  std::vector<CurvePoint> samples;
  for (int k = 0; k < 20; ++k) {
    double rad = curve.root_scale() * (0.35 + 0.09 * k);
    cplx x = rad * std::exp(kI * (2.0 * kPi * (k + 0.37) / 20.0 + 0.11));
    samples.push_back(lift(curve, x, k % 2));
  }
  std::vector<Vec2c> alphas;
  for (const auto& p : samples) alphas.push_back(reduce_vector(pd, *abel_jacobi_unreduced(ch, pd, p)));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : half_characteristics()) {
    if (!is_odd(c)) continue;
    double scale = theta_scale(c, pd.Omega);
    double worst = 0.0;
    for (const auto& z : alphas)
      worst = std::max(worst, theta_normalized_modulus(theta(c, z, pd.Omega), z, pd.Omega) / scale);
    if (worst < best) {
      best = worst;
      pd.delta = c;
    }
  }
  return pd;
}

namespace {

nlohmann::json mat_to_json(const Mat2c& m) {
  nlohmann::json j = nlohmann::json::array();
  for (int r = 0; r < 2; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(m(r, c)));
    j.push_back(row);
  }
  return j;
}

Mat2c mat_from_json(const nlohmann::json& j) {
  Mat2c m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = complex_from_json(j.at(r).at(c));
  return m;
}

}  // namespace

nlohmann::json to_json(const PeriodData& pd) {
  nlohmann::json j;
  j["Omega"] = mat_to_json(pd.Omega);
  j["A_periods"] = mat_to_json(pd.A);
  j["B_periods"] = mat_to_json(pd.B);
  j["delta"] = {{pd.delta.a(0), pd.delta.a(1)}, {pd.delta.b(0), pd.delta.b(1)}};
  nlohmann::json basis = nlohmann::json::array(), inter = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    basis.push_back({pd.cycle_basis(r, 0), pd.cycle_basis(r, 1), pd.cycle_basis(r, 2), pd.cycle_basis(r, 3)});
    inter.push_back({pd.intersection(r, 0), pd.intersection(r, 1), pd.intersection(r, 2), pd.intersection(r, 3)});
  }
  j["cycle_basis"] = basis;
  j["loop_intersections"] = inter;
  j["quadrature_order"] = pd.quadrature_order;
  j["refinements"] = pd.refinements;
  j["precision_target"] = pd.precision_target;
  j["refinement_change"] = pd.refinement_change;
  j["curve_hash"] = pd.curve_hash;
  j["shift_convention"] = pd.shift_convention;
  return j;
}

PeriodData period_data_from_json(const nlohmann::json& j) {
  PeriodData pd;
  pd.Omega = mat_from_json(j.at("Omega"));
  pd.A = mat_from_json(j.at("A_periods"));
  pd.B = mat_from_json(j.at("B_periods"));
  const auto& d = j.at("delta");
  pd.delta = make_char(Eigen::Vector2d(d[0][0], d[0][1]), Eigen::Vector2d(d[1][0], d[1][1]));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      pd.cycle_basis(r, c) = j.at("cycle_basis")[r][c];
      pd.intersection(r, c) = j.at("loop_intersections")[r][c];
    }
  pd.quadrature_order = j.value("quadrature_order", 0);
  pd.refinements = j.value("refinements", 0);
  pd.precision_target = j.value("precision_target", 0.0);
  pd.refinement_change = j.value("refinement_change", 0.0);
  pd.curve_hash = j.value("curve_hash", "");
  pd.shift_convention = j.value("shift_convention", "");
  pd.finalize();
  return pd;
}

std::string period_cache_key(const CurveSpec& curve, double precision_target) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", precision_target);
  return curve_hash(curve) + "/" + buf;
}

PeriodData load_or_compute_periods(const CurveSpec& curve, double precision_target, const std::string& cache_path) {
  const std::string key = period_cache_key(curve, precision_target);
  if (!cache_path.empty()) {
    std::ifstream in(cache_path);
    if (in) {
      try {
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.value("key", "") == key) return period_data_from_json(j.at("periods"));
      } catch (const nlohmann::json::exception&) {
      }
    }
  }
  PeriodData pd = compute_periods(curve, precision_target);
  if (!cache_path.empty()) {
    std::ofstream out(cache_path);
    nlohmann::json j;
    j["key"] = key;
    j["curve"] = to_json(curve);
    j["periods"] = to_json(pd);
    out << j.dump(2) << "\n";
  }
  return pd;
}

}  // namespace kummer
