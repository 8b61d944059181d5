#include "kummer/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace kummer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::mt19937_64 rng_for(const CheckEnv& env, const char* name) { return std::mt19937_64(env.seed ^ name_hash(name)); }

ProjPoint random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return normalize(Vec2c(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))));
}

LengthTwoScheme random_scheme(const Jacobian& J, std::mt19937_64& rng, bool reduced) {
  if (reduced) return LengthTwoScheme::pair(J.random_point(rng), J.random_point(rng));
  return LengthTwoScheme::nonreduced(J.random_point(rng), random_direction(rng));
}

std::vector<std::array<int, 4>> generators() {
  std::vector<std::array<int, 4>> g;
  for (int s = 1; s <= 2; ++s)
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> e{0, 0, 0, 0};
      e[i] = s;
      g.push_back(e);
    }
  return g;
}

JacobianPoint torsion3(const EmbeddingContext& ctx, const std::array<int, 4>& e) {
  return ctx.point(torsion_point(ctx.periods(), 3, e[0], e[1], e[2], e[3]).z);
}

cplx theta_shift_factor(const ThetaChar& c, const Vec2c& z, const Mat2c& Om, const Eigen::Vector2d& n,
                        const Eigen::Vector2d& m) {
  Vec2c mc = m.cast<cplx>();
  Vec2c bc = c.b.cast<cplx>();
  cplx e = 2.0 * kPi * kI * c.a.dot(n) - kPi * kI * (mc.transpose() * Om * mc)(0) -
           2.0 * kPi * kI * (mc.transpose() * (z + bc))(0);
  return std::exp(e);
}

Vec2c random_z(const PeriodData& pd, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  return lattice_vector(pd, Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)));
}

// ---- criterion 1: periods ----

CheckOutcome periods_symmetry(const CheckEnv& env) {
  const Mat2c& Om = env.ctx.periods().Omega;
  return {1, (Om - Om.transpose()).norm() / Om.norm(), ""};
}

CheckOutcome periods_positive(const CheckEnv& env) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(env.ctx.periods().Omega.imag());
  double lmin = es.eigenvalues()(0);
  return {1, -lmin, "smallest eigenvalue of Im Omega " + std::to_string(lmin)};
}

CheckOutcome periods_theta_constants(const CheckEnv& env) {
  const PeriodData& pd = env.ctx.periods();
  double odd_max = 0.0, even_min = kInf;
  int odd_small = 0, even_small = 0;
  std::vector<double> vals;
  for (const auto& c : half_characteristics()) vals.push_back(std::abs(theta(c, Vec2c::Zero(), pd.Omega)));
  double scale = *std::max_element(vals.begin(), vals.end());
  auto chars = half_characteristics();
  for (size_t k = 0; k < chars.size(); ++k) {
    bool small = vals[k] < 1e-8 * scale;
    if (is_odd(chars[k])) {
      odd_max = std::max(odd_max, vals[k]);
      odd_small += small;
    } else {
      even_min = std::min(even_min, vals[k]);
      even_small += small;
    }
  }
  double worst = (odd_small == 6 && even_small == 0) ? odd_max / even_min : kInf;
  return {16, worst, std::to_string(odd_small) + " odd and " + std::to_string(even_small) + " even constants vanish"};
}

CheckOutcome periods_runtime(const CheckEnv& env) {
  auto t0 = std::chrono::steady_clock::now();
  PeriodData pd = compute_periods(env.ctx.curve());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double drift = (pd.Omega - env.ctx.periods().Omega).norm();
  return {1, secs, "recomputed in " + std::to_string(secs) + " s, drift " + std::to_string(drift)};
}

// ---- criterion 2: theta kernel ----

CheckOutcome theta_quasi_periodicity(const CheckEnv& env) {
  auto rng = rng_for(env, "theta.quasi_periodicity");
  const PeriodData& pd = env.ctx.periods();
  auto chars = half_characteristics();
  chars.push_back(pd.delta);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(chars.size()) - 1), im(-2, 2);
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const ThetaChar& c = chars[pick(rng)];
    Vec2c z = random_z(pd, rng);
    Eigen::Vector2d nn(im(rng), im(rng)), mm(im(rng), im(rng));
    Vec2c w = z + nn.cast<cplx>() + pd.Omega * mm.cast<cplx>();
    cplx lhs = theta(c, w, pd.Omega);
    cplx rhs = theta_shift_factor(c, z, pd.Omega, nn, mm) * theta(c, z, pd.Omega);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  }
  return {n, worst, ""};
}

CheckOutcome theta_parity(const CheckEnv& env) {
  auto rng = rng_for(env, "theta.parity");
  const PeriodData& pd = env.ctx.periods();
  auto chars = half_characteristics();
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const ThetaChar& c = chars[k % chars.size()];
    Vec2c z = random_z(pd, rng);
    double sign = is_odd(c) ? -1.0 : 1.0;
    cplx p = theta(c, z, pd.Omega), m = theta(c, -z, pd.Omega);
    worst = std::max(worst, std::abs(m - sign * p) / std::max(std::abs(p), std::abs(m)));
  }
  return {n, worst, ""};
}

CheckOutcome theta_jets_fd(const CheckEnv& env) {
  auto rng = rng_for(env, "theta.jets_fd");
  const PeriodData& pd = env.ctx.periods();
  const int n = env.count(20);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Vec2c z = random_z(pd, rng);
    ThetaJets J = theta_jets(pd.delta, z, pd.Omega, 2);
    double scale = 0.0;
    for (auto d : J.d) scale = std::max(scale, std::abs(d));
    for (int dir = 0; dir < 2; ++dir) {
      Vec2c e = Vec2c::Zero();
      e(dir) = h;
      cplx fd = (theta(pd.delta, z + e, pd.Omega) - theta(pd.delta, z - e, pd.Omega)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - J(dir == 0, dir == 1)) / scale);
      ThetaJets Jp = theta_jets(pd.delta, z + e, pd.Omega, 1), Jm = theta_jets(pd.delta, z - e, pd.Omega, 1);
      for (int o = 0; o < 2; ++o) {
        cplx fd2 = (Jp(o == 0, o == 1) - Jm(o == 0, o == 1)) / (2.0 * h);
        cplx ex = J((dir == 0) + (o == 0), (dir == 1) + (o == 1));
        worst = std::max(worst, std::abs(fd2 - ex) / scale);
      }
    }
  }
  return {n, worst, "first and second derivatives, step 1e-5"};
}

// ---- criterion 3: Abel-Jacobi ----

CheckOutcome abel_involution(const CheckEnv& env) {
  auto rng = rng_for(env, "abel_jacobi.involution");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    CurvePoint x = J.random_curve_point(rng);
    worst = std::max(worst, torus_norm(J.periods(), J.alpha(x).z + J.alpha(involute(J.curve(), x)).z));
  }
  return {n, worst, ""};
}

CheckOutcome abel_on_theta(const CheckEnv& env) {
  auto rng = rng_for(env, "abel_jacobi.on_theta");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, J.theta_residual(J.alpha(J.random_curve_point(rng)).z));
  return {n, worst, "normalized by the median theta modulus"};
}

// ---- criterion 4: Heisenberg ----

CheckOutcome heisenberg_translation(const CheckEnv& env) {
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(20);
  double worst = 0.0;
  int total = 0;
  for (const auto& g : generators()) {
    const MatrixFit& M = ctx.heisenberg(g[0], g[1], g[2], g[3]);
    JacobianPoint e = torsion3(ctx, g);
    for (const auto& a : ctx.spread_points(n, env.seed + 77)) {
      worst = std::max(worst, fs_distance(M.M * ctx.phi3(a).v, ctx.phi3(add(a, e)).v));
      ++total;
    }
  }
  return {total, worst, "8 generators, fresh samples"};
}

CheckOutcome heisenberg_composition(const CheckEnv& env) {
  const EmbeddingContext& ctx = env.ctx;
  auto gens = generators();
  double worst = 0.0;
  int total = 0;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j) {
      const auto& e = gens[i];
      const auto& f = gens[j];
      const MatXc& Me = ctx.heisenberg(e[0], e[1], e[2], e[3]).M;
      const MatXc& Mf = ctx.heisenberg(f[0], f[1], f[2], f[3]).M;
      const MatXc& Ms = ctx.heisenberg(e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]).M;
      worst = std::max(worst, matrix_fs_distance(Me * Mf, Ms));
      ++total;
    }
  return {total, worst, "all pairs of generators"};
}

// ---- criterion 5: the involution ----

CheckOutcome tau_reduced(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremC.tau_involution_reduced");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    LengthTwoScheme z = random_scheme(J, rng, true);
    worst = std::max(worst, scheme_distance(J.tau(J.tau(z)), z));
  }
  return {n, worst, ""};
}

CheckOutcome tau_nonreduced(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremC.tau_involution_nonreduced");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    LengthTwoScheme z = random_scheme(J, rng, false);
    worst = std::max(worst, scheme_distance(J.tau(J.tau(z)), z));
  }
  return {n, worst, ""};
}

CheckOutcome tau_sum(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremC.sum_invariant");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(50);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    LengthTwoScheme z = random_scheme(J, rng, k % 5 != 4);
    worst = std::max(worst, point_distance(J.tau(z).sum(), z.sum()));
  }
  return {n, worst, ""};
}

bool inside(const Jacobian& J, const LengthTwoScheme& z, const JacobianPoint& c) {
  if (z.reduced) return J.on_theta(c, z.a) && J.on_theta(c, z.b);
  return J.on_theta(c, z.a) && J.tangency_residual(c, z.a, J.tangent_vector(z.v)) < 1e-6;
}

CheckOutcome tau_symmetry_lemma(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremC.symmetry_lemma");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(30);
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    LengthTwoScheme z = random_scheme(J, rng, k % 3 != 2);
    LengthTwoScheme t = J.tau(z);
    std::vector<JacobianPoint> supp = {t.a};
    if (t.reduced) supp.push_back(t.b);
    for (const auto& c : supp) bad += !inside(J, z, c);
    JacobianPoint r = J.random_point(rng);
    bool in_tau = false;
    for (const auto& c : supp) in_tau = in_tau || is_equal(c, r, 1e-6);
    bad += (inside(J, z, r) != in_tau);
  }
  return {n, double(bad), "mismatches between membership in the image and containment"};
}

CheckOutcome tau_exceptional(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremC.exceptional_to_translate");
  const Jacobian& J = env.ctx.jac();
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    LengthTwoScheme z = random_scheme(J, rng, false);
    LengthTwoScheme t = J.tau(z);
    worst = std::max({worst, J.theta_residual(t.a.z - z.a.z), J.theta_residual(t.b.z - z.a.z)});
  }
  return {n, worst, "image of (a, v) lies on the translate by a"};
}

// ---- criterion 6: spans ----

CheckOutcome spans_dimension(const CheckEnv& env) {
  auto rng = rng_for(env, "spans.dimension");
  const int n = env.count(20);
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    try {
      env.ctx.translate_span(env.ctx.jac().random_point(rng));
    } catch (const Error& e) {
      if (e.code() != Errc::WrongSpanDimension) throw;
      ++bad;
    }
  }
  return {n, double(bad), "translates whose span is not a 4-space"};
}

CheckOutcome spans_pair_line(const CheckEnv& env) {
  auto rng = rng_for(env, "spans.pair_intersection");
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
    Subspace L = intersect({ctx.translate_span(a), ctx.translate_span(b)});
    if (L.proj_dim() != 1) return {k + 1, kInf, "intersection has dimension " + std::to_string(L.proj_dim())};
    LengthTwoScheme t = ctx.jac().tau(LengthTwoScheme::pair(a, b));
    worst = std::max({worst, distance_to_subspace(ctx.phi3(t.a), L), distance_to_subspace(ctx.phi3(t.b), L)});
  }
  return {n, worst, "distance of the image points to the intersection line"};
}

CheckOutcome spans_triple_positive(const CheckEnv& env) {
  auto rng = rng_for(env, "spans.triple_positive");
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
    PhiDDiagnostics d;
    phi_D(ctx, KummerTriple::triple(a, b, neg(add(a, b))), &d);
    worst = std::max(worst, d.sigma_min);
  }
  return {n, worst, "smallest singular value of the stacked complements"};
}

CheckOutcome spans_triple_negative(const CheckEnv& env) {
  auto rng = rng_for(env, "spans.triple_negative");
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(20);
  double smallest = kInf;
  for (int k = 0; k < n; ++k) {
    JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
    ProjPoint dir = random_direction(rng);
    JacobianPoint c = ctx.point(-(a.z + b.z) + 0.1 * dir.v.head<2>());
    PhiDDiagnostics d;
    try {
      phi_D(ctx, KummerTriple::triple(a, b, c), &d);
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyIntersection) throw;
    }
    smallest = std::min(smallest, d.sigma_min);
  }
  return {n, 1.0 / smallest, "reciprocal of the smallest singular value over perturbed triples"};
}

// ---- criterion 7: Coble cubic ----

CheckOutcome coble_uniqueness(const CheckEnv& env) {
  const auto& C = env.ctx.coble();
  return {C.sampling.samples, 1.0 / C.fit.gap, "reciprocal nullspace gap " + std::to_string(C.fit.gap)};
}

CheckOutcome coble_singular(const CheckEnv& env) {
  const int n = env.count(30);
  double worst = 0.0;
  for (const auto& a : env.ctx.spread_points(n, env.seed + 303))
    worst = std::max(worst, env.ctx.coble_gradient_residual(env.ctx.phi3(a)));
  return {n, worst, "relative gradient norm on fresh points of A"};
}

CheckOutcome coble_invariance(const CheckEnv& env) {
  auto rng = rng_for(env, "coble.heisenberg_invariance");
  const FormCoefficients& F = env.ctx.coble().fit.form;
  auto mons = monomials(9, 3);
  const int K = 2 * static_cast<int>(mons.size());
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<VecXc> xs;
  MatXc V(K, mons.size());
  for (int k = 0; k < K; ++k) {
    VecXc x(9);
    for (int i = 0; i < 9; ++i) x(i) = cplx(g(rng), g(rng));
    x /= x.norm();
    xs.push_back(x);
    V.row(k) = monomial_values(mons, x).transpose();
  }
  auto qr = V.colPivHouseholderQr();
  double worst = 0.0;
  int total = 0;
  for (const auto& e : generators()) {
    const MatXc& M = env.ctx.heisenberg(e[0], e[1], e[2], e[3]).M;
    MatXc Mn = M / M.norm() * 3.0;
    VecXc rhs(K);
    for (int k = 0; k < K; ++k) rhs(k) = F.eval(Mn * xs[k]);
    VecXc c = qr.solve(rhs);
    worst = std::max(worst, fs_distance(c, F.coeffs));
    ++total;
  }
  return {total, worst, "coefficients of F composed with each generator matrix"};
}

// ---- criterion 8: duality ----

KummerTriple generic_triple(const EmbeddingContext& ctx, std::mt19937_64& rng) {
  for (;;) {
    JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
    KummerTriple t = KummerTriple::triple(a, b, neg(add(a, b)));
    if (t.min_separation() < 1e-2) continue;
    ProjPoint p = phi_D(ctx, t);
    if (ctx.coble_gradient_residual(p) < 1e-3) continue;
    return t;
  }
}

CheckOutcome duality(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremB.duality");
  const int n = env.count(30);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, verify_duality(env.ctx, generic_triple(env.ctx, rng)));
  return {n, worst, "polar of phi_D against the level-3 divisor vector"};
}

CheckOutcome duality_routes(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremB.secant_route");
  const int n = env.count(30);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    PhiDDiagnostics d;
    phi_D(env.ctx, generic_triple(env.ctx, rng), &d);
    worst = std::max(worst, d.route_gap);
  }
  return {n, worst, "span intersection against secant-line intersection"};
}

CheckOutcome contraction(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremB.contraction");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(10);
  double worst = 0.0;
  int raised = 0;
  for (int k = 0; k < n; ++k) {
    Vec2c al[3];
    Vec2c s = Vec2c::Zero();
    for (auto& x : al) {
      x = J.alpha_unreduced(J.random_curve_point(rng));
      s += x;
    }
    const Vec2c e = -s / 3.0;
    KummerTriple t = KummerTriple::triple(J.point(al[0] + e), J.point(al[1] + e), J.point(al[2] + e));
    worst = std::max(worst, fs_distance(phi_D(ctx, t), ctx.phi3(J.point(e))));
    try {
      verify_duality(ctx, t);
    } catch (const Error& err) {
      if (err.code() == Errc::OnContractedLocus) ++raised;
    }
  }
  if (raised != n) worst = kInf;
  return {n, worst, std::to_string(raised) + " of " + std::to_string(n) + " polar evaluations flagged as contracted"};
}

// ---- criterion 9: Theorem A ----

CheckOutcome injectivity(const CheckEnv& env, int level, const char* name) {
  auto rng = rng_for(env, name);
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(100);
  auto tuple = [&]() {
    std::vector<JacobianPoint> pts;
    Vec2c s = Vec2c::Zero();
    for (int i = 0; i < level; ++i) {
      pts.push_back(ctx.jac().random_point(rng));
      s += pts.back().z;
    }
    pts.push_back(ctx.point(-s));
    return pts;
  };
  double smallest = kInf, resid = 0.0;
  for (int k = 0; k < n; ++k) {
    auto p = tuple(), q = tuple();
    DivisorClassVector u = phi_mu_theta(ctx, p, level), w = phi_mu_theta(ctx, q, level);
    resid = std::max({resid, u.residual, w.residual});
    smallest = std::min(smallest, fs_distance(u.coeffs, w.coeffs));
  }
  return {n, 1.0 / smallest,
          "smallest output distance " + std::to_string(smallest) + ", worst expansion residual " + std::to_string(resid)};
}

CheckOutcome injectivity2(const CheckEnv& env) { return injectivity(env, 2, "theoremA.injectivity_n2"); }
CheckOutcome injectivity3(const CheckEnv& env) { return injectivity(env, 3, "theoremA.injectivity_n3"); }

CheckOutcome expansion_residual(const CheckEnv& env) {
  auto rng = rng_for(env, "theoremA.expansion_residual");
  const EmbeddingContext& ctx = env.ctx;
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    int level = 1 + k % 3;
    std::vector<JacobianPoint> pts;
    Vec2c s = Vec2c::Zero();
    for (int i = 0; i < level; ++i) {
      pts.push_back(ctx.jac().random_point(rng));
      s += pts.back().z;
    }
    pts.push_back(ctx.point(-s));
    worst = std::max(worst, phi_mu_theta(ctx, pts, level).residual);
  }
  return {n, worst, "held-out residual, levels 1 to 3"};
}

// ---- criterion 10: Kummer K3 ----

CheckOutcome kummer_uniqueness(const CheckEnv& env) {
  const auto& K = env.ctx.kummer_quartic();
  return {K.sampling.samples, 1.0 / K.fit.gap, "reciprocal nullspace gap " + std::to_string(K.fit.gap)};
}

CheckOutcome kummer_fresh(const CheckEnv& env) {
  const FormCoefficients& Q = env.ctx.kummer_quartic().fit.form;
  const int n = env.count(50);
  double worst = 0.0;
  for (const auto& a : env.ctx.spread_points(n, env.seed + 404))
    worst = std::max(worst, std::abs(Q.eval(env.ctx.phi2(a).v)) / Q.coeffs.norm());
  return {n, worst, ""};
}

CheckOutcome kummer_polar_diagram(const CheckEnv& env) {
  auto rng = rng_for(env, "kummerK3.polar_diagram");
  const int n = env.count(20);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, k3_gap(env.ctx, env.ctx.jac().random_point(rng)));
  return {n, worst, "coordinate change fitted once from 6 samples, gap " +
                        std::to_string(k3_coordinate_change(env.ctx).gap)};
}

// ---- criterion 11: appendix ----

CheckOutcome meeting_secants(const CheckEnv& env) {
  auto rng = rng_for(env, "appendix.meeting_secants");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(20);
  int bad = 0;
  std::string first;
  auto record = [&](const MeetingReport& r, MeetingClass expected, const char* label) {
    if (!r.agree() || r.observed != expected) {
      ++bad;
      if (first.empty())
        first = std::string(label) + ": observed " + meeting_class_name(r.observed) + ", predicted " +
                meeting_class_name(r.predicted);
    }
  };
  for (int k = 0; k < n; ++k) {
    JacobianPoint e = J.random_point(rng);
    Vec2c al[4];
    for (auto& x : al) x = J.alpha_unreduced(J.random_curve_point(rng));
    record(classify_meeting_secants_report(ctx, LengthTwoScheme::pair(J.point(al[0] + e.z), J.point(al[1] + e.z)),
                                           LengthTwoScheme::pair(J.point(al[2] + e.z), J.point(al[3] + e.z))),
           MeetingClass::MeetOnA, "common translate");
  }
  for (int k = 0; k < n; ++k) {
    JacobianPoint a = J.random_point(rng), b = J.random_point(rng);
    LengthTwoScheme z1, z2;
    if (k % 3 == 0) {
      z1 = LengthTwoScheme::pair(a, b);
      z2 = LengthTwoScheme::pair(a, neg(add(a, b)));
    } else if (k % 3 == 1) {
      z1 = LengthTwoScheme::pair(a, scale(a, -2));
      z2 = LengthTwoScheme::nonreduced(a, random_direction(rng));
    } else {
      std::uniform_int_distribution<int> d(0, 2);
      std::array<int, 4> t{};
      do {
        for (auto& x : t) x = d(rng);
      } while (t == std::array<int, 4>{0, 0, 0, 0});
      JacobianPoint e3 = torsion3(ctx, t);
      z1 = LengthTwoScheme::nonreduced(e3, random_direction(rng));
      z2 = LengthTwoScheme::nonreduced(e3, random_direction(rng));
    }
    record(classify_meeting_secants_report(ctx, z1, z2), MeetingClass::MeetOffA, "off the surface");
  }
  for (int k = 0; k < n; ++k) {
    record(classify_meeting_secants_report(ctx, random_scheme(J, rng, true), random_scheme(J, rng, true)),
           MeetingClass::Disjoint, "generic");
  }
  return {3 * n, double(bad), first.empty() ? "all classes agree" : first};
}

CheckOutcome terracini_pairs(const CheckEnv& env) {
  auto rng = rng_for(env, "appendix.terracini_two_points");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(20);
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    JacobianPoint b = J.random_point(rng), c = J.random_point(rng);
    ProjPoint p = normalize(ctx.phi3(b).v + 0.7 * ctx.phi3(c).v);
    bad += !terracini_two_points(ctx, b, c, p).injective;
  }
  for (int k = 0; k < n; ++k) {
    if (k % 2 == 0) {
      JacobianPoint b = J.random_point(rng), c = J.random_point(rng);
      bad += terracini_two_points(ctx, b, c, ctx.phi3(b)).injective;
    } else {
      Vec2c ax = J.alpha_unreduced(J.random_curve_point(rng)), ay = J.alpha_unreduced(J.random_curve_point(rng));
      Vec2c e = -2.0 * (ax + ay) / 3.0;
      JacobianPoint b = J.point(ax + e), c = J.point(ay + e);
      ProjPoint p = normalize(ctx.phi3(b).v + 0.7 * ctx.phi3(c).v);
      bad += terracini_two_points(ctx, b, c, p).injective;
    }
  }
  return {2 * n, double(bad), "verdicts that contradict the construction"};
}

CheckOutcome terracini_double(const CheckEnv& env) {
  auto rng = rng_for(env, "appendix.terracini_double_point");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(20);
  int bad = 0;
  auto on_tangent = [&](const JacobianPoint& a, const ProjPoint& v) {
    Subspace T = secant_line(ctx, LengthTwoScheme::nonreduced(a, v));
    return normalize(T.basis.col(0) + 0.6 * T.basis.col(1));
  };
  for (int k = 0; k < n; ++k) {
    JacobianPoint a = J.random_point(rng);
    ProjPoint v = random_direction(rng);
    bad += !terracini_double_point(ctx, a, v, on_tangent(a, v)).injective;
  }
  for (int k = 0; k < n; ++k) {
    if (k % 2 == 0) {
      JacobianPoint a = J.random_point(rng);
      bad += terracini_double_point(ctx, a, random_direction(rng), ctx.phi3(a)).injective;
    } else {
      CurvePoint x = J.random_curve_point(rng);
      Vec2c ax = J.alpha_unreduced(x);
      JacobianPoint b = J.point(ax - 4.0 * ax / 3.0);
      ProjPoint v = canonical_map(x);
      bad += terracini_double_point(ctx, b, v, on_tangent(b, v)).injective;
    }
  }
  return {2 * n, double(bad), "verdicts that contradict the construction"};
}

CheckOutcome separation(const CheckEnv& env) {
  auto rng = rng_for(env, "appendix.separation");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(20);
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    JetScheme three, four;
    for (int i = 0; i < 3; ++i) three.append(JetScheme::point(J.random_point(rng).z));
    four = three;
    four.append(JetScheme::point(J.random_point(rng).z));
    bad += !separates(ctx, three).separated;
    bad += !separates(ctx, four).separated;
    TranslateQuadruple q = translate_quadruple(J, rng);
    JetScheme s;
    for (const auto& p : q.points) s.append(JetScheme::point(p.z));
    bad += separates(ctx, s).separated;
    for (const auto& p : q.points) bad += !J.on_theta(q.a, p);
  }
  return {3 * n, double(bad), "random triples and quadruples separated, quadruples on a translate not"};
}

CheckOutcome fiber(const CheckEnv& env) {
  auto rng = rng_for(env, "appendix.fiber_over_N");
  const int n = env.count(10);
  int bad = 0;
  double worst_on = 0.0, closest = 1.0;
  for (int k = 0; k < n; ++k) {
    FiberReport r = fiber_over_N_report(env.ctx, generic_triple(env.ctx, rng), 200, env.seed + k);
    bad += r.count != 3 || r.min_line_separation < 1e-3;
    worst_on = std::max(worst_on, r.worst_on);
    closest = std::min(closest, r.closest_other);
  }
  return {n, double(bad),
          "worst on-secant distance " + std::to_string(worst_on) + ", closest other secant " + std::to_string(closest)};
}

// ---- criterion 12: Weddle ----

const WeddleFit& weddle(const CheckEnv& env) {
  static std::mutex mu;
  static std::map<const EmbeddingContext*, WeddleFit> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(&env.ctx);
  if (it == cache.end()) it = cache.emplace(&env.ctx, weddle_fit(env.ctx, 70, env.seed)).first;
  return it->second;
}

CheckOutcome weddle_uniqueness(const CheckEnv& env) {
  const WeddleFit& w = weddle(env);
  return {w.samples, 1.0 / w.fit.gap, "reciprocal nullspace gap " + std::to_string(w.fit.gap)};
}

CheckOutcome weddle_in_space(const CheckEnv& env) {
  const WeddleFit& w = weddle(env);
  return {w.samples, w.worst_span_distance, "distance of the sampled images to the 3-space"};
}

CheckOutcome weddle_fresh(const CheckEnv& env) {
  const WeddleFit& w = weddle(env);
  const int n = env.count(30);
  double worst = 0.0;
  for (const auto& b : env.ctx.spread_points(n, env.seed + 505)) worst = std::max(worst, weddle_residual(env.ctx, w, b));
  return {n, worst, ""};
}

// ---- criterion 13: 3-torsion on a translate ----

CheckOutcome torsion_bound(const CheckEnv& env) {
  auto rng = rng_for(env, "torsion.theta_bound");
  const EmbeddingContext& ctx = env.ctx;
  const Jacobian& J = ctx.jac();
  const int n = env.count(30);
  std::vector<JacobianPoint> tors;
  for (const auto& t : torsion_points(ctx.periods(), 3)) tors.push_back(ctx.point(t.z));
  std::uniform_int_distribution<int> pick(1, 80);
  auto count_on = [&](const JacobianPoint& a) {
    int count = 0;
    for (const auto& e : tors) count += J.on_theta(a, e);
    return count;
  };
  int worst = 0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, count_on(J.random_point(rng)));
  // translates through two chosen torsion points, reported but not gated
  int constructed_max = 0, missed = 0;
  for (int k = 0; k < n; ++k) {
    int i = pick(rng), j;
    do j = pick(rng); while (j == i);
    int c = count_on(J.tau(LengthTwoScheme::pair(tors[i], tors[j])).a);
    constructed_max = std::max(constructed_max, c);
    missed += c < 2;
  }
  if (missed) worst = std::numeric_limits<int>::max();
  return {n, double(worst), "random translates; translates through two torsion points reach " +
                                std::to_string(constructed_max) + ", " + std::to_string(missed) +
                                " miss their constructed points"};
}

std::vector<CheckSpec> build_registry() {
  return {
      {"periods.symmetry", "periods", 1, 1e-9, periods_symmetry},
      {"periods.positive_imaginary_part", "periods", 1, 0.0, periods_positive},
      {"periods.theta_constants", "periods", 1, 1e-8, periods_theta_constants},
      {"periods.runtime_seconds", "periods", 1, 30.0, periods_runtime},
      {"theta.quasi_periodicity", "theta", 2, 1e-8, theta_quasi_periodicity},
      {"theta.parity", "theta", 2, 1e-8, theta_parity},
      {"theta.jets_vs_differences", "theta", 2, 1e-6, theta_jets_fd},
      {"abel_jacobi.involution", "abel_jacobi", 3, 1e-7, abel_involution},
      {"abel_jacobi.on_theta", "abel_jacobi", 3, 1e-7, abel_on_theta},
      {"heisenberg.translation", "heisenberg", 4, 1e-7, heisenberg_translation},
      {"heisenberg.composition", "heisenberg", 4, 1e-6, heisenberg_composition},
      {"theoremC.tau_involution_reduced", "theoremC", 5, 1e-7, tau_reduced},
      {"theoremC.tau_involution_nonreduced", "theoremC", 5, 1e-7, tau_nonreduced},
      {"theoremC.sum_invariant", "theoremC", 5, 1e-7, tau_sum},
      {"theoremC.symmetry_lemma", "theoremC", 5, 0.5, tau_symmetry_lemma},
      {"theoremC.exceptional_to_translate", "theoremC", 5, 1e-6, tau_exceptional},
      {"spans.dimension", "spans", 6, 0.5, spans_dimension},
      {"spans.pair_intersection", "spans", 6, 1e-6, spans_pair_line},
      {"spans.triple_positive", "spans", 6, 1e-6, spans_triple_positive},
      {"spans.triple_negative", "spans", 6, 1e3, spans_triple_negative},
      {"coble.uniqueness", "coble", 7, 1e-3, coble_uniqueness},
      {"coble.singular_along_surface", "coble", 7, 1e-6, coble_singular},
      {"coble.heisenberg_invariance", "coble", 7, 1e-6, coble_invariance},
      {"theoremB.duality", "theoremB", 8, 1e-5, duality},
      {"theoremB.secant_route", "theoremB", 8, 1e-6, duality_routes},
      {"theoremB.contraction", "theoremB", 8, 1e-5, contraction},
      {"theoremA.injectivity_n2", "theoremA", 9, 1e4, injectivity2},
      {"theoremA.injectivity_n3", "theoremA", 9, 1e4, injectivity3},
      {"theoremA.expansion_residual", "theoremA", 9, 1e-7, expansion_residual},
      {"kummerK3.quartic_uniqueness", "kummerK3", 10, 1e-3, kummer_uniqueness},
      {"kummerK3.quartic_fresh", "kummerK3", 10, 1e-7, kummer_fresh},
      {"kummerK3.polar_diagram", "kummerK3", 10, 1e-5, kummer_polar_diagram},
      {"appendix.meeting_secants", "appendix", 11, 0.5, meeting_secants},
      {"appendix.terracini_two_points", "appendix", 11, 0.5, terracini_pairs},
      {"appendix.terracini_double_point", "appendix", 11, 0.5, terracini_double},
      {"appendix.separation", "appendix", 11, 0.5, separation},
      {"appendix.fiber_over_N", "appendix", 11, 0.5, fiber},
      {"weddle.uniqueness", "weddle", 12, 1e-2, weddle_uniqueness},
      {"weddle.in_anti_invariant_space", "weddle", 12, 1e-6, weddle_in_space},
      {"weddle.fresh_residual", "weddle", 12, 1e-6, weddle_fresh},
      {"torsion.theta_bound", "torsion", 13, 2.5, torsion_bound},
  };
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

std::vector<std::string> VerifyReport::failing() const {
  std::vector<std::string> out;
  for (const auto& r : records)
    if (!r.pass) out.push_back(r.name);
  return out;
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

}  // namespace

nlohmann::json to_json(const VerifyReport& r, bool include_timing) {
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["curve_hash"] = r.curve_hash;
  j["seed"] = r.seed;
  j["group"] = r.group;
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& c : r.records) {
    nlohmann::json e;
    e["name"] = c.name;
    e["group"] = c.group;
    e["criterion"] = c.criterion;
    e["samples"] = c.samples;
    e["worst_gap"] = number(c.worst_gap);
    e["threshold"] = c.threshold;
    e["pass"] = c.pass;
    e["note"] = c.note;
    if (include_timing) e["wall_time"] = c.wall_time;
    recs.push_back(e);
  }
  j["records"] = recs;
  j["all_pass"] = r.all_pass();
  return j;
}

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> reg = build_registry();
  return reg;
}

std::vector<std::string> check_groups() {
  std::vector<std::string> out;
  for (const auto& c : check_registry())
    if (std::find(out.begin(), out.end(), c.group) == out.end()) out.push_back(c.group);
  return out;
}

bool is_check_group(const std::string& group) {
  if (group == "all") return true;
  auto g = check_groups();
  return std::find(g.begin(), g.end(), group) != g.end();
}

VerifyReport run_checks(const EmbeddingContext& ctx, const std::string& group, const VerifyConfig& cfg) {
  if (!is_check_group(group)) throw Error(Errc::BadInput, "unknown check group " + group);
  VerifyReport rep;
  rep.curve_hash = curve_hash(ctx.curve());
  rep.seed = cfg.seed;
  rep.group = group;
  for (const auto& spec : check_registry()) {
    if (group != "all" && spec.group != group) continue;
    CheckRecord rec;
    rec.name = spec.name;
    rec.group = spec.group;
    rec.criterion = spec.criterion;
    auto ov = cfg.tolerances.find(spec.name);
    rec.threshold = ov != cfg.tolerances.end() ? ov->second : spec.threshold;
    rep.tolerances[spec.name] = rec.threshold;
    CheckEnv env{ctx, cfg.seed, cfg.samples};
    auto t0 = std::chrono::steady_clock::now();
    try {
      CheckOutcome out = spec.run(env);
      rec.samples = out.samples;
      rec.worst_gap = out.worst;
      rec.note = out.note;
    } catch (const std::exception& e) {
      rec.worst_gap = kInf;
      rec.note = std::string("error: ") + e.what();
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.pass = rec.worst_gap < rec.threshold;
    rep.records.push_back(rec);
  }
  return rep;
}

}  // namespace kummer
