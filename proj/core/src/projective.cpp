#include "kummer/projective.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/SVD>

namespace kummer {

ProjPoint::ProjPoint(const VecXc& coords) : v(normalize(coords).v) {}

ProjPoint normalize(const VecXc& coords) {
  ProjPoint p;
  double n = coords.norm();
  if (!(n > 0.0)) throw Error(Errc::Precondition, "zero vector has no projective point");
  VecXc u = coords / n;
  double mx = u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-10 * mx) {
      u *= std::conj(u(i)) / std::abs(u(i));
      break;
    }
  }
  p.v = u;
  return p;
}

double fs_distance(const VecXc& p, const VecXc& q) {
  VecXc u = p / p.norm();
  VecXc w = q / q.norm();
  return std::min(1.0, (u - w * w.dot(u)).norm());
}

double fs_distance(const ProjPoint& p, const ProjPoint& q) { return fs_distance(p.v, q.v); }

Subspace span_vectors(const MatXc& columns, double rank_tol) {
  Subspace s;
  s.ambient = static_cast<int>(columns.rows()) - 1;
  Eigen::BDCSVD<MatXc> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * sv(0)) ++rank;
  s.basis = svd.matrixU().leftCols(rank);
  return s;
}

Subspace span(const std::vector<ProjPoint>& points, double rank_tol) {
  if (points.empty()) throw Error(Errc::Precondition, "span of no points");
  MatXc cols(points.front().size(), points.size());
  for (size_t k = 0; k < points.size(); ++k) cols.col(k) = points[k].v;
  return span_vectors(cols, rank_tol);
}

Subspace intersect(const std::vector<Subspace>& subspaces, double rank_tol) {
  if (subspaces.empty()) throw Error(Errc::Precondition, "intersection of nothing");
  const int n = subspaces.front().ambient + 1;
  for (const auto& s : subspaces)
    if (s.ambient + 1 != n) throw Error(Errc::Precondition, "ambient dimensions differ");
  MatXc stacked(n * subspaces.size(), n);
  for (size_t k = 0; k < subspaces.size(); ++k)
    stacked.block(k * n, 0, n, n) = MatXc::Identity(n, n) - subspaces[k].projector();
  Eigen::BDCSVD<MatXc> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int null = 0;
  for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
    if (sv(i) <= rank_tol) ++null;
    else break;
  }
  Subspace out;
  out.ambient = n - 1;
  out.basis = svd.matrixV().rightCols(null);
  return out;
}

double distance_to_subspace(const VecXc& p, const Subspace& s) {
  VecXc u = p / p.norm();
  if (s.basis.cols() == 0) return 1.0;
  return (u - s.basis * (s.basis.adjoint() * u)).norm();
}

double distance_to_subspace(const ProjPoint& p, const Subspace& s) { return distance_to_subspace(p.v, s); }

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.basis.cols() != b.basis.cols()) return 1.0;
  MatXc d = a.projector() - b.projector();
  Eigen::JacobiSVD<MatXc> svd(d);
  return svd.singularValues()(0);
}

double min_angle_sine(const Subspace& a, const Subspace& b) {
  if (a.basis.cols() == 0 || b.basis.cols() == 0) return 1.0;
  MatXc m = a.basis.adjoint() * b.basis;
  Eigen::JacobiSVD<MatXc> svd(m);
  double c = std::min(1.0, svd.singularValues()(0));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

std::vector<double> singular_values_of_rows(const MatXc& rows) {
  Eigen::BDCSVD<MatXc> svd(rows);
  std::vector<double> out(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  return out;
}

std::vector<std::vector<int>> monomials(int num_vars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(num_vars, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == num_vars - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      rec(var + 1, left - k);
    }
  };
  rec(0, degree);
  return out;
}

namespace {

std::vector<VecXc> power_table(const VecXc& x, int degree) {
  std::vector<VecXc> pw(degree + 1, VecXc::Ones(x.size()));
  for (int d = 1; d <= degree; ++d) pw[d] = pw[d - 1].cwiseProduct(x);
  return pw;
}

}  // namespace

VecXc monomial_values(const std::vector<std::vector<int>>& mons, const VecXc& x) {
  int degree = 0;
  for (int e : mons.front()) degree += e;
  auto pw = power_table(x, degree);
  VecXc out(mons.size());
  for (size_t k = 0; k < mons.size(); ++k) {
    cplx v = 1.0;
    for (size_t i = 0; i < mons[k].size(); ++i) v *= pw[mons[k][i]](i);
    out(k) = v;
  }
  return out;
}

MatXc monomial_gradients(const std::vector<std::vector<int>>& mons, const VecXc& x) {
  int degree = 0;
  for (int e : mons.front()) degree += e;
  auto pw = power_table(x, degree);
  const int m = static_cast<int>(x.size());
  MatXc out = MatXc::Zero(m, mons.size());
  for (size_t k = 0; k < mons.size(); ++k) {
    for (int j = 0; j < m; ++j) {
      if (mons[k][j] == 0) continue;
      cplx v = double(mons[k][j]);
      for (int i = 0; i < m; ++i) v *= pw[i == j ? mons[k][i] - 1 : mons[k][i]](i);
      out(j, k) = v;
    }
  }
  return out;
}

cplx FormCoefficients::eval(const VecXc& x) const {
  auto mons = monomials(num_vars, degree);
  return monomial_values(mons, x).cwiseProduct(coeffs).sum();
}

VecXc FormCoefficients::gradient(const VecXc& x) const {
  auto mons = monomials(num_vars, degree);
  return monomial_gradients(mons, x) * coeffs;
}

MatXc FormCoefficients::hessian(const VecXc& x) const {
  const double h = 1e-5;
  MatXc H(num_vars, num_vars);
  for (int j = 0; j < num_vars; ++j) {
    VecXc xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    H.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * h);
  }
  return H;
}

FitResult fit_hypersurface(const std::vector<ProjPoint>& samples, int degree, JetConditions jets, double rank_tol) {
  if (samples.empty()) throw Error(Errc::Precondition, "no samples");
  const int m = static_cast<int>(samples.front().size());
  auto mons = monomials(m, degree);
  const int nm = static_cast<int>(mons.size());
  const int per = jets == JetConditions::Gradient ? m : 1;
  const int rows = per * static_cast<int>(samples.size());
  if (rows < nm + 5) throw Error(Errc::Precondition, "need at least monomials + 5 conditions");
  MatXc M(rows, nm);
  for (size_t k = 0; k < samples.size(); ++k) {
    if (jets == JetConditions::Gradient) {
      M.block(k * m, 0, m, nm) = monomial_gradients(mons, samples[k].v);
    } else {
      M.row(k) = monomial_values(mons, samples[k].v).transpose();
    }
  }
  Eigen::BDCSVD<MatXc> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double s1 = sv(0);
  const double last = sv(nm - 1) / s1;
  const double prev = sv(nm - 2) / s1;
  FitResult out;
  out.conditions = rows;
  for (int i = nm - 1; i >= std::max(0, nm - 4); --i) out.tail.push_back(sv(i) / s1);
  out.gap = prev / std::max(last, 1e-300);
  int nullity = 0;
  for (int i = 0; i < nm; ++i) nullity += sv(i) / s1 < rank_tol;
  if (out.gap < 10.0 || nullity > 1)
    throw Error(Errc::NullspaceNotOneDimensional,
                "two smallest normalized singular values " + std::to_string(prev) + ", " + std::to_string(last) + ", " +
                    std::to_string(nullity) + " below tolerance");
  out.form.degree = degree;
  out.form.num_vars = m;
  VecXc c = svd.matrixV().col(nm - 1);
  out.form.coeffs = normalize(c).v;
  return out;
}

ProjPoint polar_map(const FormCoefficients& F, const ProjPoint& p, double indeterminacy_tol) {
  if (F.degree < 2) throw Error(Errc::Precondition, "polar map needs degree >= 2");
  VecXc g = F.gradient(p.v);
  double scale = F.coeffs.norm() * std::pow(p.v.norm(), F.degree - 1);
  if (g.norm() < indeterminacy_tol * scale) throw Error(Errc::IndeterminacyPoint, "gradient vanishes");
  return normalize(g);
}

MatrixFit fit_projective_map(const std::vector<VecXc>& src, const std::vector<VecXc>& dst) {
  if (src.size() != dst.size() || src.empty()) throw Error(Errc::Precondition, "sample lists differ");
  const int c = static_cast<int>(src.front().size());
  const int r = static_cast<int>(dst.front().size());
  const int nu = r * c;
  MatXc rows(r * src.size(), nu);
  for (size_t k = 0; k < src.size(); ++k) {
    VecXc w = dst[k] / dst[k].norm();
    MatXc P = MatXc::Identity(r, r) - w * w.adjoint();
    VecXc v = src[k] / src[k].norm();
    for (int i = 0; i < r; ++i)
      for (int l = 0; l < c; ++l)
        for (int j = 0; j < r; ++j) rows(k * r + i, j + l * r) = P(i, j) * v(l);
  }
  if (rows.rows() < nu) throw Error(Errc::Precondition, "too few samples for the matrix fit");
  Eigen::BDCSVD<MatXc> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  MatrixFit out;
  out.gap = sv(nu - 2) / std::max(sv(nu - 1), 1e-300);
  VecXc m = svd.matrixV().col(nu - 1);
  out.M = Eigen::Map<MatXc>(m.data(), r, c);
  out.M /= out.M.norm();
  return out;
}

double matrix_fs_distance(const MatXc& a, const MatXc& b) {
  Eigen::Map<const VecXc> va(a.data(), a.size());
  Eigen::Map<const VecXc> vb(b.data(), b.size());
  return fs_distance(VecXc(va), VecXc(vb));
}

nlohmann::json complex_to_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw Error(Errc::BadInput, "complex numbers are [re, im] pairs");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

nlohmann::json to_json(const FormCoefficients& F) {
  nlohmann::json j;
  j["monomial_order"] = kMonomialOrder;
  j["degree"] = F.degree;
  j["num_vars"] = F.num_vars;
  j["coefficients"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < F.coeffs.size(); ++k) j["coefficients"].push_back(complex_to_json(F.coeffs(k)));
  return j;
}

FormCoefficients form_from_json(const nlohmann::json& j) {
  if (j.value("monomial_order", "") != std::string(kMonomialOrder))
    throw Error(Errc::BadInput, "unsupported monomial order tag");
  FormCoefficients F;
  F.degree = j.at("degree");
  F.num_vars = j.at("num_vars");
  const auto& c = j.at("coefficients");
  F.coeffs.resize(c.size());
  for (size_t k = 0; k < c.size(); ++k) F.coeffs(k) = complex_from_json(c[k]);
  if (static_cast<size_t>(F.coeffs.size()) != monomials(F.num_vars, F.degree).size())
    throw Error(Errc::BadInput, "coefficient count does not match degree and variables");
  return F;
}

}  // namespace kummer
