#include "kummer/types.hpp"

namespace kummer {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::BadDegree: return "BadDegree";
    case Errc::BadEtaIndex: return "BadEtaIndex";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::IllConditionedPeriods: return "IllConditionedPeriods";
    case Errc::PathThroughBranchPoint: return "PathThroughBranchPoint";
    case Errc::RadiusOverflow: return "RadiusOverflow";
    case Errc::MixedPeriodData: return "MixedPeriodData";
    case Errc::RootCountMismatch: return "RootCountMismatch";
    case Errc::CoincidentDivisors: return "CoincidentDivisors";
    case Errc::NullspaceNotOneDimensional: return "NullspaceNotOneDimensional";
    case Errc::IndeterminacyPoint: return "IndeterminacyPoint";
    case Errc::WrongSpanDimension: return "WrongSpanDimension";
    case Errc::EigensplitFailed: return "EigensplitFailed";
    case Errc::SumNotZero: return "SumNotZero";
    case Errc::ExpansionResidualTooLarge: return "ExpansionResidualTooLarge";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::UnexpectedDimension: return "UnexpectedDimension";
    case Errc::OnContractedLocus: return "OnContractedLocus";
    case Errc::PointNotOnSecant: return "PointNotOnSecant";
    case Errc::PointNotOnTangent: return "PointNotOnTangent";
    case Errc::ClassificationMismatch: return "ClassificationMismatch";
    case Errc::UnexpectedIncidence: return "UnexpectedIncidence";
    case Errc::Precondition: return "Precondition";
    case Errc::BadInput: return "BadInput";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

}  // namespace kummer
