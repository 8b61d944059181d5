#pragma once

#include <string>
#include <vector>

#include "kummer/kummer_maps.hpp"

namespace kummer {

struct JetTerm {
  cplx coef;
  int i = 0;  // order in z1
  int j = 0;  // order in z2
};

// One linear functional on sections: a combination of partial derivatives at z.
struct JetFunctional {
  Vec2c z = Vec2c::Zero();
  std::vector<JetTerm> terms;
};

struct JetScheme {
  std::vector<JetFunctional> rows;

  int length() const { return static_cast<int>(rows.size()); }
  JetScheme& append(const JetScheme& other);

  static JetScheme point(const Vec2c& z);
  static JetScheme tangent(const Vec2c& z, const Vec2c& t);
  // Image of Spec C[t]/t^length under t -> z + g[0] t + g[1] t^2 + g[2] t^3.
  static JetScheme curvilinear(const Vec2c& z, const std::vector<Vec2c>& g, int length);
  // (z1^2, z2^2) in the coordinates z = z1 u + z2 w.
  static JetScheme planar(const Vec2c& z, const Vec2c& u, const Vec2c& w);
};

inline constexpr int kMaxSchemeLength = 6;
inline constexpr double kSeparationTol = 1e-6;

struct Separation {
  bool separated = false;
  double ratio = 0.0;  // sigma_len / sigma_1
};

Separation separates(const EmbeddingContext& ctx, const JetScheme& scheme);

struct TerraciniVerdict {
  bool injective = false;
  double rank_ratio = 0.0;       // worst separation ratio seen
  double point_distance = 0.0;   // from p to the excluded points
  std::string witness;           // first failing condition, empty when injective
  bool sampled = false;          // pass relies on a finite probe family
};

TerraciniVerdict terracini_two_points(const EmbeddingContext& ctx, const JacobianPoint& b, const JacobianPoint& c,
                                      const ProjPoint& p);
TerraciniVerdict terracini_double_point(const EmbeddingContext& ctx, const JacobianPoint& a, const ProjPoint& v,
                                        const ProjPoint& p);

enum class MeetingClass { Disjoint, MeetOnA, MeetOffA, Ambiguous };
const char* meeting_class_name(MeetingClass c);

struct MeetingReport {
  MeetingClass observed = MeetingClass::Ambiguous;
  MeetingClass predicted = MeetingClass::Disjoint;
  int condition = 0;             // 1..4 from the Jacobian arithmetic, 0 when none holds
  double angle_sine = 0.0;       // between the two secant lines
  double on_a_residual = 0.0;    // Coble gradient residual at the meeting point
  ProjPoint point;               // meeting point when the lines meet
  std::vector<JacobianPoint> common_translates;  // e with both schemes inside Theta_e

  bool agree() const { return observed == predicted; }
};

MeetingReport classify_meeting_secants_report(const EmbeddingContext& ctx, const LengthTwoScheme& z1,
                                              const LengthTwoScheme& z2);
// Same, throwing ClassificationMismatch when the numerics disagree with the arithmetic.
MeetingReport classify_meeting_secants(const EmbeddingContext& ctx, const LengthTwoScheme& z1,
                                       const LengthTwoScheme& z2);

struct FiberReport {
  int count = 0;
  double worst_on = 0.0;        // largest distance to the three expected secants
  double closest_other = 1.0;   // smallest distance to the random pool
  double min_line_separation = 0.0;
};

FiberReport fiber_over_N_report(const EmbeddingContext& ctx, const KummerTriple& xi, int pool = 200,
                                std::uint64_t seed = 11);
int fiber_over_N(const EmbeddingContext& ctx, const KummerTriple& xi, int pool = 200, std::uint64_t seed = 11);

// Four points a + alpha(x_i) with sum alpha(x_i) = -3a, i.e. x_1 + ... + x_4 in |2K - 3a|.
struct TranslateQuadruple {
  JacobianPoint a;
  std::vector<JacobianPoint> points;
};
TranslateQuadruple translate_quadruple(const Jacobian& J, std::mt19937_64& rng);

}  // namespace kummer
