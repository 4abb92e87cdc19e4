#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace labornet {

struct AggregatePoint {
  std::int64_t t = 0;
  double unemployed = 0.0;
  double vacancies = 0.0;
  double employed = 0.0;
  double longTermUnemployed = 0.0;
};

/// Per-occupation snapshot at one step.
struct OccupationPoint {
  std::vector<double> employed;
  std::vector<double> unemployed;
  std::vector<double> vacancies;
  std::vector<double> longTermUnemployed;
};

/// Output of either engine: row t is the state after t steps (row 0 is the
/// initial state).
struct Trajectory {
  std::vector<AggregatePoint> aggregate;
  std::vector<OccupationPoint> occupations;  ///< empty unless requested

  bool has_occupations() const noexcept { return !occupations.empty(); }
  std::size_t occupation_count() const noexcept {
    return occupations.empty() ? 0 : occupations.front().employed.size();
  }
};

}  // namespace labornet
