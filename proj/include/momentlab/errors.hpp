#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace momentlab {

enum class ErrorKind {
  DimensionMismatch,
  NotPSD,
  KernelNotContained,
  SingularForm,
  ZeroNormDirection,
  NotInScope,
  HypothesisUnverifiable,
  NotHomogeneous,
  DegreeOverflow,
  NotSquarePositive,
  NegativeEvenMoment,
  NotContinuous,
  InfiniteTrace,
  NotSubset,
  KernelIssue,
  HypothesisNotCertified,
  RankNotFlat,
  IllConditioned,
  IncompleteSystem,
  InvalidArgument,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// True for the kinds raised by numerical preconditions (as opposed to
/// malformed input); the CLI maps these to a separate exit code.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) raise(kind, what);
}

}  // namespace momentlab
