#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kummer {

using cplx = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

enum class Errc {
  NotSquarefree,
  BadDegree,
  BadEtaIndex,
  QuadratureNotConverged,
  IllConditionedPeriods,
  PathThroughBranchPoint,
  RadiusOverflow,
  MixedPeriodData,
  RootCountMismatch,
  CoincidentDivisors,
  NullspaceNotOneDimensional,
  IndeterminacyPoint,
  WrongSpanDimension,
  EigensplitFailed,
  SumNotZero,
  ExpansionResidualTooLarge,
  EmptyIntersection,
  UnexpectedDimension,
  OnContractedLocus,
  PointNotOnSecant,
  PointNotOnTangent,
  ClassificationMismatch,
  UnexpectedIncidence,
  Precondition,
  BadInput,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kummer
