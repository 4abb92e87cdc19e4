#include "labornet/params.hpp"

#include <cmath>
#include <cstdio>

#include "labornet/error.hpp"

namespace labornet {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IsolatedOccupation: return "IsolatedOccupation";
    case ErrorKind::UnmappedOccupation: return "UnmappedOccupation";
    case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorKind::AllAutomated: return "AllAutomated";
    case ErrorKind::NonPositiveSteepness: return "NonPositiveSteepness";
    case ErrorKind::AmplitudeOutOfRange: return "AmplitudeOutOfRange";
    case ErrorKind::DuplicateCode: return "DuplicateCode";
    case ErrorKind::HorizonExceedsPath: return "HorizonExceedsPath";
    case ErrorKind::NegativeStateComponent: return "NegativeStateComponent";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::AllCellsDegenerate: return "AllCellsDegenerate";
    case ErrorKind::RInfeasible: return "RInfeasible";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ModelParams ModelParams::calibrated(double laborForce) {
  ModelParams p;
  p.deltaU = 0.016;
  p.deltaV = 0.012;
  p.gammaU = 10.0 * p.deltaU;
  p.gammaV = 10.0 * p.deltaU;
  p.dtWeeks = 6.75;
  p.tauSteps = long_term_threshold_steps(p.dtWeeks);
  p.laborForce = laborForce;
  return p;
}

namespace {
void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}
}  // namespace

void ModelParams::validate() const {
  require_probability(deltaU, "delta_u");
  require_probability(deltaV, "delta_v");
  require_probability(gammaU, "gamma_u");
  require_probability(gammaV, "gamma_v");
  if (!(dtWeeks > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "dt_weeks must be positive");
  }
  if (tauSteps < 1) {
    throw Error(ErrorKind::InvalidArgument, "tau_steps must be at least 1");
  }
  if (!(laborForce >= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "labor_force must be at least 1");
  }
}

std::string ModelParams::describe() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "delta_u=%.17g delta_v=%.17g gamma_u=%.17g gamma_v=%.17g "
                "dt_weeks=%.17g tau_steps=%lld labor_force=%.17g",
                deltaU, deltaV, gammaU, gammaV, dtWeeks,
                static_cast<long long>(tauSteps), laborForce);
  return buf;
}

std::int64_t long_term_threshold_steps(double dtWeeks) {
  if (!(dtWeeks > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "dt_weeks must be positive");
  }
  // Guard against 27/6.75 = 4.000000000000001 style roundoff.
  const double steps = kLongTermWeeks / dtWeeks;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) < 1e-9) return static_cast<std::int64_t>(rounded);
  return static_cast<std::int64_t>(std::ceil(steps));
}

}  // namespace labornet
