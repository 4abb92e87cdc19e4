#pragma once

#include <cstdint>
#include <string>

namespace labornet {

/// Weeks of unemployment after which a spell counts as long-term.
inline constexpr double kLongTermWeeks = 27.0;

struct ModelParams {
  double deltaU = 0.016;  ///< spontaneous separation probability per step
  double deltaV = 0.012;  ///< spontaneous vacancy-opening probability per step
  double gammaU = 0.16;   ///< adjustment speed when realized demand is too high
  double gammaV = 0.16;   ///< adjustment speed when realized demand is too low
  double dtWeeks = 6.75;
  std::int64_t tauSteps = 4;  ///< long-term unemployment threshold, in steps
  double laborForce = 1.0;

  /// Calibrated profile (gamma = 10 * deltaU, tau from the 27-week rule).
  static ModelParams calibrated(double laborForce);

  double steps_per_year() const noexcept { return 52.0 / dtWeeks; }

  /// Throws Error(InvalidArgument) naming the offending field.
  void validate() const;

  std::string describe() const;
};

/// Smallest tau with tau * dtWeeks >= 27 weeks.
std::int64_t long_term_threshold_steps(double dtWeeks);

}  // namespace labornet
