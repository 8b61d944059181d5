#pragma once

#include <random>

#include <gtest/gtest.h>

#include "kummer/terracini.hpp"

namespace kummer::test {

// Shared context on the default curve, built once per process.
inline const EmbeddingContext& ctx() {
  static const CurveSpec curve = default_curve();
  static const PeriodData pd = compute_periods(curve);
  static const EmbeddingContext c(curve, pd);
  return c;
}

inline const Jacobian& jac() { return ctx().jac(); }
inline const PeriodData& pd() { return ctx().periods(); }

inline ProjPoint random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return normalize(Vec2c(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))));
}

inline VecXc random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  VecXc v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

inline Vec2c random_z(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  return lattice_vector(pd(), Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)));
}

// Reduced triple a + b + c = 0 with pairwise separation at least 1e-2.
inline KummerTriple generic_triple(std::mt19937_64& rng) {
  for (;;) {
    JacobianPoint a = jac().random_point(rng), b = jac().random_point(rng);
    KummerTriple t = KummerTriple::triple(a, b, neg(add(a, b)));
    if (t.min_separation() > 1e-2) return t;
  }
}

#define EXPECT_ERRC(stmt, errc)                                   \
  do {                                                            \
    try {                                                         \
      stmt;                                                       \
      ADD_FAILURE() << "expected " << errc_name(errc);            \
    } catch (const ::kummer::Error& e) {                          \
      EXPECT_EQ(errc_name(e.code()), std::string(errc_name(errc))); \
    }                                                             \
  } while (0)

}  // namespace kummer::test
