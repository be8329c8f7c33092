#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bondkit {

enum class ErrorKind {
  NonPositiveAlpha,
  NonPositiveSigma,
  NegativeGamma,
  NonFiniteParameter,
  FellerViolated,
  InvalidGrid,
  GammaMismatch,
  DomainError,
  StepTooLarge,
  InvalidConfig,
  UnsupportedGamma,
  UnstableSolve,
  TridiagonalSingular,
  NonPositiveError,
  ZeroMaturity,
  GridMismatch,
  MissingPdeSolution,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bondkit
