#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace labornet {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  IsolatedOccupation,
  UnmappedOccupation,
  ScoreOutOfRange,
  AllAutomated,
  NonPositiveSteepness,
  AmplitudeOutOfRange,
  DuplicateCode,
  HorizonExceedsPath,
  NegativeStateComponent,
  NoConvergence,
  EmptySeries,
  EmptyWindow,
  ZeroDenominator,
  TooFewPoints,
  DegenerateCurve,
  AllCellsDegenerate,
  RInfeasible,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by the steady-state solver; carries the last max-norm step change.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(double residual, std::int64_t iterations)
      : Error(ErrorKind::NoConvergence,
              "steady state did not converge after " +
                  std::to_string(iterations) +
                  " iterations (residual " + std::to_string(residual) + ")"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::int64_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::int64_t iterations_;
};

}  // namespace labornet
