#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chernlab {

enum class ErrorKind {
  NotPositiveDefinite,
  DimensionMismatch,
  DimensionError,
  NonFiniteValue,
  UnknownCatalogName,
  BadParams,
  ParseError,
  NonHermitianExpression,
  EvaluationDomainError,
  DomainMarginError,
  NonFiniteSample,
  FiniteDifferenceInconsistency,
  ZeroVector,
  ZeroSingularValue,
  NotHolomorphicAtPoint,
  NearCriticalPoint,
  RankDeficient,
  InverseMapFailure,
  InfeasibleHypothesis,
  UnboundedSbc,
  HypothesisSignError,
  FormInequalityViolated,
  BadIndices,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the library is reported through this type; `kind()` is the
// stable, machine-readable part and ends up verbatim in scenario reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chernlab
