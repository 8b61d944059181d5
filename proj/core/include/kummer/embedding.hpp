#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kummer/jacobian.hpp"
#include "kummer/projective.hpp"

namespace kummer {

struct EmbeddingOptions {
  std::uint64_t seed = 42;
  int coble_samples = 48;
  int kummer_samples = 70;
  int heisenberg_samples = 12;
  // relative gradient norm below which a polar map is treated as undefined
  double contracted_tol = 1e-10;
};

struct SamplingInfo {
  std::uint64_t seed = 0;
  int samples = 0;
  std::string scheme;
};

struct HypersurfaceFit {
  FitResult fit;
  SamplingInfo sampling;
};

// Shifted additive-recurrence points of the fundamental cell.
std::vector<Vec2c> spread_cell(const PeriodData& pd, int count, std::uint64_t seed);

class EmbeddingContext {
 public:
  EmbeddingContext(const CurveSpec& curve, const PeriodData& pd, const EmbeddingOptions& opts = {});
  EmbeddingContext(const EmbeddingContext&) = delete;
  EmbeddingContext& operator=(const EmbeddingContext&) = delete;

  const Jacobian& jac() const { return *jac_; }
  const PeriodData& periods() const { return jac_->periods(); }
  const CurveSpec& curve() const { return jac_->curve(); }
  const EmbeddingOptions& options() const { return opts_; }
  JacobianPoint point(const Vec2c& z) const { return jac_->point(z); }
  JacobianPoint zero() const { return jac_->zero(); }

  // Well-spread points of the fundamental cell; stream separates independent uses.
  std::vector<JacobianPoint> spread_points(int count, std::uint64_t stream) const;

  VecXc theta3(const Vec2c& z) const;
  // 9 x (jet count) matrix, columns indexed as ThetaJets::index.
  MatXc theta3_jets(const Vec2c& z, int order) const;
  ProjPoint phi3(const JacobianPoint& a) const;
  ProjPoint phi2(const JacobianPoint& a) const;

  Subspace translate_span(const JacobianPoint& a) const;

  const HypersurfaceFit& coble() const;
  const HypersurfaceFit& kummer_quartic() const;
  ProjPoint coble_polar(const ProjPoint& p) const;
  ProjPoint kummer_polar(const ProjPoint& p) const;
  // |grad F(p)| / (|F| |p|^2) for the Coble cubic; vanishes exactly on phi3(A).
  double coble_gradient_residual(const ProjPoint& p) const;

  // Projective 9x9 matrix of translation by the 3-torsion point with indices (i, j, k, l).
  const MatrixFit& heisenberg(int i, int j, int k, int l) const;

  // Named matrix fits computed once per context.
  const MatrixFit& cached_map(const std::string& name, const std::function<MatrixFit()>& build) const;

 private:
  std::unique_ptr<Jacobian> jac_;
  EmbeddingOptions opts_;

  mutable std::mutex span_mu_;
  mutable std::map<std::array<long long, 4>, Subspace> spans_;
  mutable std::mutex fit_mu_;
  mutable std::optional<HypersurfaceFit> coble_;
  mutable std::optional<HypersurfaceFit> kummer_;
  mutable std::mutex heis_mu_;
  mutable std::map<int, MatrixFit> heis_;
  mutable std::mutex named_mu_;
  mutable std::map<std::string, MatrixFit> named_;
};

HypersurfaceFit build_coble(const EmbeddingContext& ctx, std::uint64_t seed);
HypersurfaceFit build_kummer_quartic(const EmbeddingContext& ctx, std::uint64_t seed);

inline ProjPoint phi3(const EmbeddingContext& ctx, const JacobianPoint& a) { return ctx.phi3(a); }
inline ProjPoint phi2(const EmbeddingContext& ctx, const JacobianPoint& a) { return ctx.phi2(a); }
inline Subspace translate_span(const EmbeddingContext& ctx, const JacobianPoint& a) { return ctx.translate_span(a); }
inline ProjPoint coble_polar(const EmbeddingContext& ctx, const ProjPoint& p) { return ctx.coble_polar(p); }
inline ProjPoint kummer_polar(const EmbeddingContext& ctx, const ProjPoint& p) { return ctx.kummer_polar(p); }

struct IotaSplitting {
  ProjPoint O;        // isolated eigendirection
  Subspace P3;        // complementary 3-space
  MatXc frame;        // 9 x 5, O followed by the P3 basis
  double involution_residual = 0.0;  // |N^2 - I| after normalization
  int plus_dim = 0;
  int minus_dim = 0;

  // Coordinates in P3 of the projection from O of a point in the span.
  VecXc project(const ProjPoint& p) const;
};

IotaSplitting iota_splitting(const EmbeddingContext& ctx, const JacobianPoint& a);

// Index (i, j, k, l) in {0,1,2}^4 of a 3-torsion point; nullopt otherwise.
std::optional<std::array<int, 4>> torsion_index(const PeriodData& pd, const JacobianPoint& a, int n, double tol = 1e-8);

}  // namespace kummer
