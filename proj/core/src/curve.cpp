#include "kummer/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/Eigenvalues>

namespace kummer {

cplx CurveSpec::eval(cplx x) const {
  cplx r = 0.0;
  for (int k = 6; k >= 0; --k) r = r * x + f[k];
  return r;
}

cplx CurveSpec::deriv(cplx x) const {
  cplx r = 0.0;
  for (int k = 6; k >= 1; --k) r = r * x + double(k) * f[k];
  return r;
}

cplx CurveSpec::deriv2(cplx x) const {
  cplx r = 0.0;
  for (int k = 6; k >= 2; --k) r = r * x + double(k * (k - 1)) * f[k];
  return r;
}

double CurveSpec::root_scale() const {
  double m = 0.0;
  for (auto r : roots) m = std::max(m, std::abs(r));
  return std::max(m, 1e-300);
}

std::vector<cplx> sorted_roots(const std::vector<cplx>& r) {
  double scale = 1.0;
  for (auto z : r) scale = std::max(scale, std::abs(z));
  const double tol = 1e-9 * scale;
  std::vector<cplx> out = r;
  std::sort(out.begin(), out.end(), [tol](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

namespace {

std::vector<cplx> polynomial_roots(const std::array<cplx, 7>& f, int degree) {
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -f[i] / f[degree];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + degree);
  CurveSpec tmp;
  tmp.f = f;
  for (auto& r : roots) {
    for (int it = 0; it < 50; ++it) {
      cplx d = tmp.deriv(r);
      if (std::abs(d) == 0.0) break;
      cplx step = tmp.eval(r) / d;
      r -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
    }
  }
  return roots;
}

}  // namespace

CurveSpec new_curve(const std::array<cplx, 7>& coeffs, int eta_index) {
  int degree = -1;
  for (int k = 6; k >= 0; --k) {
    if (std::abs(coeffs[k]) > 0.0) {
      degree = k;
      break;
    }
  }
  if (degree != 5 && degree != 6) throw Error(Errc::BadDegree, "deg f = " + std::to_string(degree));
  CurveSpec c;
  c.f = coeffs;
  c.degree = degree;
  auto roots = polynomial_roots(coeffs, degree);
  double maxmod = 0.0;
  for (auto r : roots) maxmod = std::max(maxmod, std::abs(r));
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= 1e-8 * std::max(maxmod, 1e-300))
        throw Error(Errc::NotSquarefree, "roots coincide near " + std::to_string(roots[i].real()) + "+" +
                                             std::to_string(roots[i].imag()) + "i");
  c.roots = sorted_roots(roots);
  if (eta_index < 0 || eta_index > 5) throw Error(Errc::BadEtaIndex, std::to_string(eta_index));
  c.eta_index = eta_index;
  return c;
}

CurveSpec default_curve() {
  std::array<cplx, 7> f{};
  f[5] = 1.0;
  f[1] = -1.0;
  return new_curve(f, 2);
}

CurvePoint involute(const CurveSpec& curve, const CurvePoint& p) {
  if (p.infinite) {
    if (curve.degree == 6) return CurvePoint::at_infinity(1 - p.branch);
    return p;
  }
  return CurvePoint::affine(p.x, -p.y);
}

ProjPoint canonical_map(const CurvePoint& p) {
  VecXc v(2);
  if (p.infinite) {
    v << 0.0, 1.0;
  } else {
    v << 1.0, p.x;
  }
  return normalize(v);
}

bool on_curve(const CurveSpec& curve, const CurvePoint& p, double rel_tol) {
  if (p.infinite) return curve.degree == 5 ? p.branch == 0 : (p.branch == 0 || p.branch == 1);
  cplx fx = curve.eval(p.x);
  return std::abs(p.y * p.y - fx) <= rel_tol * (1.0 + std::abs(fx));
}

bool is_weierstrass(const CurveSpec& curve, const CurvePoint& p, double tol) {
  if (p.infinite) return curve.degree == 5;
  return std::abs(p.y) <= tol * (1.0 + curve.root_scale());
}

CurvePoint weierstrass_point(const CurveSpec& curve, int index) {
  if (index < static_cast<int>(curve.roots.size())) return CurvePoint::affine(curve.roots[index], 0.0);
  if (curve.degree == 5 && index == 5) return CurvePoint::at_infinity(0);
  throw Error(Errc::BadEtaIndex, "no Weierstrass point with index " + std::to_string(index));
}

CurvePoint eta_point(const CurveSpec& curve) { return weierstrass_point(curve, curve.eta_index); }

CurvePoint lift(const CurveSpec& curve, cplx x, int sheet) {
  cplx y = std::sqrt(curve.eval(x));
  return CurvePoint::affine(x, sheet == 0 ? y : -y);
}

nlohmann::json to_json(const CurveSpec& c) {
  nlohmann::json j;
  j["f"] = nlohmann::json::array();
  for (auto v : c.f) j["f"].push_back(complex_to_json(v));
  j["eta_index"] = c.eta_index;
  return j;
}

CurveSpec curve_from_json(const nlohmann::json& j) {
  if (!j.contains("f") || !j["f"].is_array()) throw Error(Errc::BadInput, "curve JSON needs an \"f\" array");
  std::array<cplx, 7> f{};
  const auto& arr = j["f"];
  if (arr.size() > 7) throw Error(Errc::BadDegree, "more than 7 coefficients");
  for (size_t k = 0; k < arr.size(); ++k) f[k] = complex_from_json(arr[k]);
  int eta = j.value("eta_index", 0);
  return new_curve(f, eta);
}

std::string curve_hash(const CurveSpec& c) {
  std::string s = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kummer
