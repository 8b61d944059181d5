#include <random>

#include <benchmark/benchmark.h>

#include "kummer/terracini.hpp"

namespace {

using namespace kummer;

const EmbeddingContext& context() {
  static const CurveSpec curve = default_curve();
  static const PeriodData pd = compute_periods(curve);
  static const EmbeddingContext ctx(curve, pd);
  return ctx;
}

void BM_Periods(benchmark::State& state) {
  const CurveSpec curve = default_curve();
  for (auto _ : state) benchmark::DoNotOptimize(compute_periods(curve));
}
BENCHMARK(BM_Periods)->Unit(benchmark::kMillisecond);

void BM_Theta(benchmark::State& state) {
  const PeriodData& pd = context().periods();
  std::mt19937_64 rng(1);
  Vec2c z = context().jac().random_point(rng).z;
  for (auto _ : state) benchmark::DoNotOptimize(theta(pd.delta, z, pd.Omega));
}
BENCHMARK(BM_Theta);

void BM_ThetaJets(benchmark::State& state) {
  const PeriodData& pd = context().periods();
  std::mt19937_64 rng(2);
  Vec2c z = context().jac().random_point(rng).z;
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(theta_jets(pd.delta, z, pd.Omega, order));
}
BENCHMARK(BM_ThetaJets)->Arg(1)->Arg(3);

void BM_LevelBasis(benchmark::State& state) {
  const PeriodData& pd = context().periods();
  std::mt19937_64 rng(3);
  Vec2c z = context().jac().random_point(rng).z;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(level_basis(n, z, pd));
}
BENCHMARK(BM_LevelBasis)->Arg(2)->Arg(3);

void BM_AbelJacobi(benchmark::State& state) {
  const Jacobian& J = context().jac();
  std::mt19937_64 rng(4);
  CurvePoint x = J.random_curve_point(rng);
  for (auto _ : state) benchmark::DoNotOptimize(J.alpha(x));
}
BENCHMARK(BM_AbelJacobi)->Unit(benchmark::kMicrosecond);

void BM_Tau(benchmark::State& state) {
  const Jacobian& J = context().jac();
  std::mt19937_64 rng(5);
  LengthTwoScheme z = LengthTwoScheme::pair(J.random_point(rng), J.random_point(rng));
  for (auto _ : state) benchmark::DoNotOptimize(J.tau(z));
}
BENCHMARK(BM_Tau)->Unit(benchmark::kMicrosecond);

void BM_CobleFit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_coble(context(), 42));
}
BENCHMARK(BM_CobleFit)->Unit(benchmark::kMillisecond);

void BM_KummerQuarticFit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_kummer_quartic(context(), 43));
}
BENCHMARK(BM_KummerQuarticFit)->Unit(benchmark::kMillisecond);

void BM_PhiD(benchmark::State& state) {
  const EmbeddingContext& ctx = context();
  std::mt19937_64 rng(6);
  JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
  KummerTriple t = KummerTriple::triple(a, b, neg(add(a, b)));
  for (auto _ : state) benchmark::DoNotOptimize(phi_D(ctx, t));
}
BENCHMARK(BM_PhiD)->Unit(benchmark::kMicrosecond);

void BM_PhiMuTheta(benchmark::State& state) {
  const EmbeddingContext& ctx = context();
  std::mt19937_64 rng(7);
  JacobianPoint a = ctx.jac().random_point(rng), b = ctx.jac().random_point(rng);
  for (auto _ : state) benchmark::DoNotOptimize(phi_mu_theta(ctx, {a, b, neg(add(a, b))}, 2));
}
BENCHMARK(BM_PhiMuTheta)->Unit(benchmark::kMicrosecond);

void BM_TerraciniDoublePoint(benchmark::State& state) {
  const EmbeddingContext& ctx = context();
  std::mt19937_64 rng(8);
  JacobianPoint a = ctx.jac().random_point(rng);
  ProjPoint v = normalize(Vec2c(cplx(1.0, 0.2), cplx(-0.4, 0.7)));
  Subspace T = secant_line(ctx, LengthTwoScheme::nonreduced(a, v));
  ProjPoint p = normalize(T.basis.col(0) + 0.6 * T.basis.col(1));
  for (auto _ : state) benchmark::DoNotOptimize(terracini_double_point(ctx, a, v, p));
}
BENCHMARK(BM_TerraciniDoublePoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
