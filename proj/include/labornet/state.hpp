#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "labornet/spells.hpp"

namespace labornet {

/// Integer labor market state of the stochastic engine.
struct LaborState {
  std::vector<std::int64_t> employed;
  std::vector<std::int64_t> vacancies;
  SpellHistogram<std::int64_t> unemployed;  ///< spell-resolved unemployment

  LaborState() = default;
  LaborState(std::size_t occupations, std::size_t spellBins)
      : employed(occupations, 0), vacancies(occupations, 0),
        unemployed(occupations, spellBins) {}

  std::size_t size() const noexcept { return employed.size(); }
  std::int64_t unemployed_in(std::size_t i) const { return unemployed.total(i); }
  std::int64_t workers() const;  ///< sum of employed and unemployed

  /// Throws InvalidArgument on negative counts, DimensionMismatch on ragged
  /// vectors, and when `laborForce` >= 0 on a worker total that differs from it.
  void validate(std::int64_t laborForce = -1) const;

  friend bool operator==(const LaborState&, const LaborState&) = default;
};

/// Expected-value state of the deterministic engine.
struct MeanState {
  std::vector<double> employed;
  std::vector<double> unemployed;
  std::vector<double> vacancies;
  SpellHistogram<double> spells;  ///< sums to `unemployed` per occupation

  MeanState() = default;
  MeanState(std::size_t occupations, std::size_t spellBins)
      : employed(occupations, 0.0), unemployed(occupations, 0.0),
        vacancies(occupations, 0.0), spells(occupations, spellBins) {}

  std::size_t size() const noexcept { return employed.size(); }
  double workers() const;
  double long_term(std::size_t i, std::int64_t tau) const { return spells.at_least(i, tau); }

  friend bool operator==(const MeanState&, const MeanState&) = default;
};

MeanState to_mean_state(const LaborState& state);

/// Integer state closest to `state` with exactly `laborForce` workers.
/// Employment and unemployment are apportioned by largest remainder over
/// (occupation, status) cells; spells within an occupation likewise.
/// Vacancies are rounded to nearest.
LaborState round_to_labor_state(const MeanState& state, std::int64_t laborForce);

}  // namespace labornet
