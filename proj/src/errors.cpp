#include "momentlab/errors.hpp"

namespace momentlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::KernelNotContained: return "KernelNotContained";
    case ErrorKind::SingularForm: return "SingularForm";
    case ErrorKind::ZeroNormDirection: return "ZeroNormDirection";
    case ErrorKind::NotInScope: return "NotInScope";
    case ErrorKind::HypothesisUnverifiable: return "HypothesisUnverifiable";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::NotSquarePositive: return "NotSquarePositive";
    case ErrorKind::NegativeEvenMoment: return "NegativeEvenMoment";
    case ErrorKind::NotContinuous: return "NotContinuous";
    case ErrorKind::InfiniteTrace: return "InfiniteTrace";
    case ErrorKind::NotSubset: return "NotSubset";
    case ErrorKind::KernelIssue: return "KernelIssue";
    case ErrorKind::HypothesisNotCertified: return "HypothesisNotCertified";
    case ErrorKind::RankNotFlat: return "RankNotFlat";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::IncompleteSystem: return "IncompleteSystem";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  return kind != ErrorKind::Config && kind != ErrorKind::Io &&
         kind != ErrorKind::InvalidArgument &&
         kind != ErrorKind::DimensionMismatch;
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace momentlab
