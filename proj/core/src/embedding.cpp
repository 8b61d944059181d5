#include "kummer/embedding.hpp"

#include <cmath>
#include <random>

#include <Eigen/SVD>

namespace kummer {

namespace {

// Additive recurrence on the plastic-type constant for dimension 4.
std::array<double, 4> r4_alphas() {
  double g = 1.0;
  for (int i = 0; i < 40; ++i) g = std::pow(1.0 + g, 1.0 / 5.0);
  std::array<double, 4> a{};
  for (int i = 0; i < 4; ++i) a[i] = std::fmod(std::pow(1.0 / g, i + 1), 1.0);
  return a;
}

std::array<long long, 4> span_key(const PeriodData& pd, const Vec2c& z) {
  Eigen::Vector4d t = lattice_coords(pd, reduce_vector(pd, z));
  std::array<long long, 4> k{};
  for (int i = 0; i < 4; ++i) k[i] = std::llround(t(i) * 1e9);
  return k;
}

}  // namespace

EmbeddingContext::EmbeddingContext(const CurveSpec& curve, const PeriodData& pd, const EmbeddingOptions& opts)
    : jac_(std::make_unique<Jacobian>(curve, pd)), opts_(opts) {}

std::vector<Vec2c> spread_cell(const PeriodData& pd, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> shift{u(rng), u(rng), u(rng), u(rng)};
  static const std::array<double, 4> alpha = r4_alphas();
  std::vector<Vec2c> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    Eigen::Vector4d t;
    for (int i = 0; i < 4; ++i) t(i) = std::fmod(shift[i] + k * alpha[i], 1.0) - 0.5;
    out.push_back(lattice_vector(pd, t));
  }
  return out;
}

std::vector<JacobianPoint> EmbeddingContext::spread_points(int count, std::uint64_t stream) const {
  std::vector<JacobianPoint> out;
  for (const auto& z : spread_cell(periods(), count, opts_.seed * 0x9E3779B97F4A7C15ULL + stream))
    out.push_back(point(z));
  return out;
}

VecXc EmbeddingContext::theta3(const Vec2c& z) const { return level_basis(3, z, periods()); }

MatXc EmbeddingContext::theta3_jets(const Vec2c& z, int order) const {
  auto jets = level_basis_jets(3, z, periods(), order);
  const int nj = (order + 1) * (order + 2) / 2;
  MatXc M(9, nj);
  for (int s = 0; s < 9; ++s)
    for (int c = 0; c < nj; ++c) M(s, c) = jets[s].d[c];
  return M;
}

ProjPoint EmbeddingContext::phi3(const JacobianPoint& a) const { return normalize(theta3(a.z)); }

ProjPoint EmbeddingContext::phi2(const JacobianPoint& a) const { return normalize(level_basis(2, a.z, periods())); }

Subspace EmbeddingContext::translate_span(const JacobianPoint& a) const {
  auto key = span_key(periods(), a.z);
  {
    std::lock_guard<std::mutex> lock(span_mu_);
    auto it = spans_.find(key);
    if (it != spans_.end()) return it->second;
  }
  const auto& al = jac_->curve_sample_alphas();
  MatXc cols(9, 2 * al.size());
  for (size_t k = 0; k < al.size(); ++k) {
    cols.col(2 * k) = phi3(point(a.z + al[k])).v;
    cols.col(2 * k + 1) = phi3(point(a.z - al[k])).v;
  }
  Subspace s = span_vectors(cols);
  if (s.proj_dim() != 4)
    throw Error(Errc::WrongSpanDimension, "translate span has projective dimension " + std::to_string(s.proj_dim()));
  std::lock_guard<std::mutex> lock(span_mu_);
  return spans_.emplace(key, s).first->second;
}

HypersurfaceFit build_coble(const EmbeddingContext& ctx, std::uint64_t seed) {
  EmbeddingOptions o = ctx.options();
  std::vector<ProjPoint> samples;
  for (const auto& z : spread_cell(ctx.periods(), o.coble_samples, seed)) samples.push_back(ctx.phi3(ctx.point(z)));
  HypersurfaceFit out;
  out.fit = fit_hypersurface(samples, 3, JetConditions::Gradient);
  out.sampling = {seed, o.coble_samples, "r4 sequence on the cell, gradient conditions"};
  return out;
}

HypersurfaceFit build_kummer_quartic(const EmbeddingContext& ctx, std::uint64_t seed) {
  EmbeddingOptions o = ctx.options();
  std::vector<ProjPoint> samples;
  for (const auto& z : spread_cell(ctx.periods(), o.kummer_samples, seed)) samples.push_back(ctx.phi2(ctx.point(z)));
  HypersurfaceFit out;
  out.fit = fit_hypersurface(samples, 4, JetConditions::None);
  out.sampling = {seed, o.kummer_samples, "r4 sequence on the cell, evaluation conditions"};
  return out;
}

const HypersurfaceFit& EmbeddingContext::coble() const {
  std::lock_guard<std::mutex> lock(fit_mu_);
  if (!coble_) coble_ = build_coble(*this, opts_.seed);
  return *coble_;
}

const HypersurfaceFit& EmbeddingContext::kummer_quartic() const {
  std::lock_guard<std::mutex> lock(fit_mu_);
  if (!kummer_) kummer_ = build_kummer_quartic(*this, opts_.seed + 1);
  return *kummer_;
}

ProjPoint EmbeddingContext::coble_polar(const ProjPoint& p) const {
  return polar_map(coble().fit.form, p, opts_.contracted_tol);
}

ProjPoint EmbeddingContext::kummer_polar(const ProjPoint& p) const {
  return polar_map(kummer_quartic().fit.form, p, opts_.contracted_tol);
}

double EmbeddingContext::coble_gradient_residual(const ProjPoint& p) const {
  const auto& F = coble().fit.form;
  return F.gradient(p.v).norm() / (F.coeffs.norm() * p.v.squaredNorm());
}

const MatrixFit& EmbeddingContext::heisenberg(int i, int j, int k, int l) const {
  auto m3 = [](int x) { return ((x % 3) + 3) % 3; };
  const int key = ((m3(i) * 3 + m3(j)) * 3 + m3(k)) * 3 + m3(l);
  {
    std::lock_guard<std::mutex> lock(heis_mu_);
    auto it = heis_.find(key);
    if (it != heis_.end()) return it->second;
  }
  JacobianPoint e = torsion_point(periods(), 3, m3(i), m3(j), m3(k), m3(l));
  auto pts = spread_points(opts_.heisenberg_samples, 1000 + key);
  std::vector<VecXc> src, dst;
  for (const auto& p : pts) {
    src.push_back(theta3(p.z));
    dst.push_back(theta3(p.z + e.z));
  }
  MatrixFit fit = fit_projective_map(src, dst);
  std::lock_guard<std::mutex> lock(heis_mu_);
  return heis_.emplace(key, fit).first->second;
}

const MatrixFit& EmbeddingContext::cached_map(const std::string& name, const std::function<MatrixFit()>& build) const {
  std::lock_guard<std::mutex> lock(named_mu_);
  auto it = named_.find(name);
  if (it != named_.end()) return it->second;
  return named_.emplace(name, build()).first->second;
}

std::optional<std::array<int, 4>> torsion_index(const PeriodData& pd, const JacobianPoint& a, int n, double tol) {
  Eigen::Vector4d t = lattice_coords(pd, a.z) * double(n);
  std::array<int, 4> r{};
  for (int i = 0; i < 4; ++i) {
    double q = std::round(t(i));
    if (std::abs(t(i) - q) > tol * n) return std::nullopt;
    r[i] = ((static_cast<int>(q) % n) + n) % n;
  }
  return std::array<int, 4>{r[2], r[3], r[0], r[1]};
}

VecXc IotaSplitting::project(const ProjPoint& p) const {
  VecXc x = frame.colPivHouseholderQr().solve(p.v);
  return x.tail(4);
}

IotaSplitting iota_splitting(const EmbeddingContext& ctx, const JacobianPoint& a) {
  if (!torsion_index(ctx.periods(), a, 3, 1e-7))
    throw Error(Errc::Precondition, "iota splitting needs a 3-torsion point");
  Subspace S = ctx.translate_span(a);
  const MatXc& U = S.basis;
  std::vector<VecXc> src, dst;
  for (const auto& al : ctx.jac().curve_sample_alphas()) {
    src.push_back(U.adjoint() * ctx.phi3(ctx.point(a.z + al)).v);
    dst.push_back(U.adjoint() * ctx.phi3(ctx.point(a.z - al)).v);
  }
  MatXc N = fit_projective_map(src, dst).M;
  cplx mu = (N * N).trace() / 5.0;
  N /= std::sqrt(mu);
  IotaSplitting out;
  out.involution_residual = (N * N - MatXc::Identity(5, 5)).norm();
  if (out.involution_residual > 1e-6) throw Error(Errc::EigensplitFailed, "fitted map is not an involution");

  auto range = [](const MatXc& P, int* rank) {
    Eigen::JacobiSVD<MatXc> svd(P, Eigen::ComputeFullU);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 0.5) ++r;
    *rank = r;
    return MatXc(svd.matrixU().leftCols(r));
  };
  MatXc I5 = MatXc::Identity(5, 5);
  int rp = 0, rm = 0;
  MatXc Vp = range((I5 + N) / 2.0, &rp);
  MatXc Vm = range((I5 - N) / 2.0, &rm);
  out.plus_dim = rp;
  out.minus_dim = rm;
  if (rp + rm != 5 || std::min(rp, rm) != 1)
    throw Error(Errc::EigensplitFailed, "eigenspace dimensions " + std::to_string(rp) + " and " + std::to_string(rm));
  const MatXc& V1 = rp == 1 ? Vp : Vm;
  const MatXc& V4 = rp == 1 ? Vm : Vp;
  out.O = normalize(U * V1.col(0));
  out.P3 = Subspace{8, U * V4};
  out.frame.resize(9, 5);
  out.frame.col(0) = out.O.v;
  out.frame.rightCols(4) = out.P3.basis;
  return out;
}

}  // namespace kummer
