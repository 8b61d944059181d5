#include "kummer/charts.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>

namespace kummer {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it2 = 0; it2 < 100; ++it2) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) {
          x[i] = t;
          w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
          break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
      }
    }
    std::vector<size_t> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = x[idx[i]];
      ws[i] = w[idx[i]];
    }
    it = cache.emplace(n, std::make_pair(xs, ws)).first;
  }
  nodes = it->second.first;
  weights = it->second.second;
}

CurveCharts::CurveCharts(const CurveSpec& curve) : curve_(curve) {
  const auto& e = curve_.roots;
  const int nr = static_cast<int>(e.size());
  affine_sing_ = e;
  double minpair = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nr; ++i)
    for (int j = i + 1; j < nr; ++j) minpair = std::min(minpair, std::abs(e[i] - e[j]));
  clearance_ = 0.3 * minpair;

  branch_sing_.resize(nr);
  branch_radius_.resize(nr);
  branch_quotients_.resize(nr);
  for (int k = 0; k < nr; ++k) {
    double dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nr; ++j) {
      if (j == k) continue;
      dmin = std::min(dmin, std::abs(e[j] - e[k]));
      cplx s = std::sqrt(e[j] - e[k]);
      branch_sing_[k].push_back(s);
      branch_sing_[k].push_back(-s);
    }
    branch_radius_[k] = 0.5 * dmin;
    // synthetic division of f by (x - w)
    std::vector<cplx> q(curve_.degree);
    cplx carry = 0.0;
    for (int d = curve_.degree; d >= 1; --d) {
      carry = carry * e[k] + curve_.f[d];
      q[d - 1] = carry;
    }
    branch_quotients_[k] = q;
  }
  double maxmod = curve_.root_scale();
  inf_radius_ = std::max(2.0 * maxmod, 1.0);
  for (auto r : e) {
    if (std::abs(r) < 1e-300) continue;
    if (curve_.degree == 6) {
      inf_sing_.push_back(1.0 / r);
    } else {
      cplx s = 1.0 / std::sqrt(r);
      inf_sing_.push_back(s);
      inf_sing_.push_back(-s);
    }
  }
}

cplx CurveCharts::x_of(ChartKind k, int branch, cplx s) const {
  switch (k) {
    case ChartKind::Affine: return s;
    case ChartKind::Branch: return curve_.roots[branch] + s * s;
    case ChartKind::Infinity: return curve_.degree == 6 ? 1.0 / s : 1.0 / (s * s);
  }
  return s;
}

cplx CurveCharts::root_sq(ChartKind k, int branch, cplx s) const {
  switch (k) {
    case ChartKind::Affine: return curve_.eval(s);
    case ChartKind::Branch: {
      const auto& q = branch_quotients_[branch];
      cplx x = curve_.roots[branch] + s * s;
      cplx r = 0.0;
      for (int d = static_cast<int>(q.size()) - 1; d >= 0; --d) r = r * x + q[d];
      return r;
    }
    case ChartKind::Infinity: {
      cplx r = 0.0;
      if (curve_.degree == 6) {
        for (int j = 0; j <= 6; ++j) r = r * s + curve_.f[j];
      } else {
        cplx s2 = s * s;
        for (int j = 0; j <= 5; ++j) r = r * s2 + curve_.f[j];
      }
      return r;
    }
  }
  return 0.0;
}

Vec2c CurveCharts::raw_differential(const ChartPoint& p) const {
  Vec2c w;
  switch (p.kind) {
    case ChartKind::Affine:
      w << 1.0 / p.r, p.s / p.r;
      break;
    case ChartKind::Branch: {
      cplx x = curve_.roots[p.branch] + p.s * p.s;
      w << 2.0 / p.r, 2.0 * x / p.r;
      break;
    }
    case ChartKind::Infinity:
      if (curve_.degree == 6) {
        w << -p.s / p.r, -1.0 / p.r;
      } else {
        w << -2.0 * p.s * p.s / p.r, -2.0 / p.r;
      }
      break;
  }
  return w;
}

const std::vector<cplx>& CurveCharts::singularities(ChartKind k, int branch) const {
  switch (k) {
    case ChartKind::Affine: return affine_sing_;
    case ChartKind::Branch: return branch_sing_[branch];
    case ChartKind::Infinity: return inf_sing_;
  }
  return affine_sing_;
}

double CurveCharts::singular_distance(const ChartPoint& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (auto s : singularities(p.kind, p.branch)) d = std::min(d, std::abs(p.s - s));
  return d;
}

cplx CurveCharts::continue_root(ChartKind k, int branch, cplx s, cplx previous) const {
  cplx r = std::sqrt(root_sq(k, branch, s));
  return std::abs(r - previous) <= std::abs(r + previous) ? r : -r;
}

ChartPoint CurveCharts::center(ChartKind k, int branch) const {
  ChartPoint c;
  c.kind = k;
  c.branch = branch;
  c.s = 0.0;
  if (k == ChartKind::Affine) throw Error(Errc::Precondition, "affine chart has no center");
  c.r = std::sqrt(root_sq(k, branch, 0.0));
  if (k == ChartKind::Infinity && curve_.degree == 6 && branch == 1) c.r = -c.r;
  return c;
}

CurvePoint CurveCharts::to_curve_point(const ChartPoint& p) const {
  switch (p.kind) {
    case ChartKind::Affine: return CurvePoint::affine(p.s, p.r);
    case ChartKind::Branch: return CurvePoint::affine(curve_.roots[p.branch] + p.s * p.s, p.s * p.r);
    case ChartKind::Infinity:
      if (std::abs(p.s) == 0.0) {
        if (curve_.degree == 5) return CurvePoint::at_infinity(0);
        cplx r0 = std::sqrt(curve_.f[6]);
        return CurvePoint::at_infinity(std::abs(p.r - r0) <= std::abs(p.r + r0) ? 0 : 1);
      }
      if (curve_.degree == 6) return CurvePoint::affine(1.0 / p.s, p.r / (p.s * p.s * p.s));
      return CurvePoint::affine(1.0 / (p.s * p.s), p.r / std::pow(p.s, 5));
  }
  return {};
}

ChartPoint CurveCharts::convert(const ChartPoint& p, ChartKind k, int branch) const {
  if (p.kind == k && (k != ChartKind::Branch || p.branch == branch)) return p;
  if (std::abs(p.s) == 0.0 && p.kind != ChartKind::Affine)
    throw Error(Errc::Precondition, "chart center cannot be moved to another chart");
  CurvePoint c = to_curve_point(p);
  ChartPoint out;
  out.kind = k;
  out.branch = k == ChartKind::Branch ? branch : -1;
  switch (k) {
    case ChartKind::Affine:
      out.s = c.x;
      out.r = c.y;
      break;
    case ChartKind::Branch: {
      cplx d = c.x - curve_.roots[branch];
      if (std::abs(d) == 0.0) return center(k, branch);
      out.s = std::sqrt(d);
      out.r = c.y / out.s;
      break;
    }
    case ChartKind::Infinity:
      if (curve_.degree == 6) {
        out.s = 1.0 / c.x;
        out.r = c.y * out.s * out.s * out.s;
      } else {
        out.s = 1.0 / std::sqrt(c.x);
        out.r = c.y * std::pow(out.s, 5);
      }
      break;
  }
  return out;
}

ChartPoint CurveCharts::preferred(const ChartPoint& p) const {
  if (std::abs(p.s) == 0.0 && p.kind != ChartKind::Affine) return p;
  cplx x = x_of(p.kind, p.branch, p.s);
  if (std::abs(x) > inf_radius_) return convert(p, ChartKind::Infinity, -1);
  for (size_t k = 0; k < curve_.roots.size(); ++k)
    if (std::abs(x - curve_.roots[k]) < branch_radius_[k]) return convert(p, ChartKind::Branch, static_cast<int>(k));
  return convert(p, ChartKind::Affine, -1);
}

ChartPoint CurveCharts::from_curve_point(const CurvePoint& p) const {
  if (p.infinite) {
    if (curve_.degree == 5) return center(ChartKind::Infinity, -1);
    return center(ChartKind::Infinity, p.branch);
  }
  for (size_t k = 0; k < curve_.roots.size(); ++k)
    if (std::abs(p.x - curve_.roots[k]) <= 1e-14 * (1.0 + std::abs(p.x)) && std::abs(p.y) <= 1e-7)
      return center(ChartKind::Branch, static_cast<int>(k));
  ChartPoint a;
  a.kind = ChartKind::Affine;
  a.s = p.x;
  a.r = p.y;
  return preferred(a);
}

Vec2c CurveCharts::integrate_segment(const ChartPoint& p, cplx s1, ChartPoint* end, int order) const {
  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);
  const auto& sing = singularities(p.kind, p.branch);
  Vec2c total = Vec2c::Zero();
  ChartPoint cur = p;
  const double total_len = std::abs(s1 - p.s);
  int guard = 0;
  while (true) {
    cplx rem = s1 - cur.s;
    double L = std::abs(rem);
    if (L <= 1e-15 * (1.0 + total_len)) break;
    double d = std::numeric_limits<double>::infinity();
    for (auto s : sing) d = std::min(d, std::abs(cur.s - s));
    double step = std::min(L, 0.5 * d);
    if (0.5 * d <= 1e-13 * (1.0 + total_len) || ++guard > 100000)
      throw Error(Errc::PathThroughBranchPoint, "integration path touches a branch point (chart " +
                                                     std::to_string(int(p.kind)) + ", s = " +
                                                     std::to_string(cur.s.real()) + "+" + std::to_string(cur.s.imag()) +
                                                     "i, target " + std::to_string(s1.real()) + "+" +
                                                     std::to_string(s1.imag()) + "i)");
    cplx s_end = step >= L ? s1 : cur.s + rem / L * step;
    cplx mid = 0.5 * (cur.s + s_end), half = 0.5 * (s_end - cur.s);
    cplx root = cur.r;
    for (int i = 0; i < order; ++i) {
      ChartPoint q;
      q.kind = p.kind;
      q.branch = p.branch;
      q.s = mid + half * nodes[i];
      root = continue_root(p.kind, p.branch, q.s, root);
      q.r = root;
      total += (weights[i] * half) * raw_differential(q);
    }
    cur.r = continue_root(p.kind, p.branch, s_end, root);
    cur.s = s_end;
  }
  if (end) *end = cur;
  return total;
}

std::vector<cplx> CurveCharts::plan_detours(ChartKind k, int branch, cplx s0, cplx s1) const {
  const auto& sing = singularities(k, branch);
  double clear = clearance_;
  if (k != ChartKind::Affine) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sing.size(); ++i)
      for (size_t j = i + 1; j < sing.size(); ++j) m = std::min(m, std::abs(sing[i] - sing[j]));
    clear = std::isfinite(m) ? 0.3 * m : 1.0;
  }
  std::vector<cplx> result;
  int budget = 0;
  std::function<void(cplx, cplx, int)> plan = [&](cplx a, cplx b, int depth) {
    if (++budget > 4000 || depth > 40) throw Error(Errc::PathThroughBranchPoint, "detour planning failed");
    cplx dvec = b - a;
    double L = std::abs(dvec);
    if (L == 0.0) return;
    cplx dir = dvec / L;
    double best_t = 2.0;
    cplx best_sigma = 0.0;
    double best_r = 0.0;
    for (auto sg : sing) {
      double r_eff = std::min(clear, 0.5 * std::min(std::abs(a - sg), std::abs(b - sg)));
      cplx rel = (sg - a) * std::conj(dir);
      double t = rel.real() / L;
      if (t <= 0.0 || t >= 1.0) continue;
      double dist = std::abs(rel.imag());
      if (dist < 0.6 * r_eff && t < best_t) {
        best_t = t;
        best_sigma = sg;
        best_r = r_eff;
      }
    }
    if (best_t > 1.0) {
      result.push_back(b);
      return;
    }
    if (best_r < 1e-10 * (1.0 + std::abs(best_sigma)))
      throw Error(Errc::PathThroughBranchPoint, "no clearance around a branch point");
    cplx rel = (best_sigma - a) * std::conj(dir);
    cplx normal = dir * kI;
    cplx away = rel.imag() >= 0.0 ? -normal : normal;
    cplx A = best_sigma - best_r * dir;
    cplx B = best_sigma + best_r * away;
    cplx C = best_sigma + best_r * dir;
    plan(a, A, depth + 1);
    plan(A, B, depth + 1);
    plan(B, C, depth + 1);
    plan(C, b, depth + 1);
  };
  plan(s0, s1, 0);
  return result;
}

Vec2c CurveCharts::integrate_with_detours(const ChartPoint& p, cplx s1, ChartPoint* end, int order) const {
  auto way = plan_detours(p.kind, p.branch, p.s, s1);
  Vec2c total = Vec2c::Zero();
  ChartPoint cur = p;
  for (auto w : way) {
    ChartPoint nxt;
    total += integrate_segment(cur, w, &nxt, order);
    cur = nxt;
  }
  if (end) *end = cur;
  return total;
}

}  // namespace kummer
