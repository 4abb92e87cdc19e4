#pragma once

// Grid-search calibration against a reference Beveridge curve, the self-loop
// weight from annual mobility, and cyclicality sweeps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "labornet/meanfield.hpp"
#include "labornet/metrics.hpp"
#include "labornet/network.hpp"
#include "labornet/params.hpp"

namespace labornet {

/// `count` evenly spaced values from min to max; a single value is `min`.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
  void validate(const char* name) const;
};

struct GridSpec {
  GridAxis amplitude;
  GridAxis deltaU;
  GridAxis deltaV;
  GridAxis dtWeeks;
  ModelParams base;  ///< gamma and labor force are held fixed

  std::size_t cells() const noexcept {
    return amplitude.count * deltaU.count * deltaV.count * dtWeeks.count;
  }
  void validate() const;
};

/// Business cycle used to trace a model curve.
struct CycleSpec {
  double periodYears = 14.6;
  std::int64_t warmupCycles = 1;  ///< full cycles discarded before the measured one
  double phaseYears = 0.0;
};

/// Params for one grid cell: base with the cell's rates and step length, tau from the 27-week rule.
ModelParams cell_params(const ModelParams& base, double deltaU, double deltaV, double dtWeeks);

/// Start at the steady state for `d0`, run warmup + 1 cycles of the pro-rata
/// sine under the mean-field engine, and return the final cycle's
/// (u-rate, v-rate) points (one period plus the closing point).
BeveridgeCurve model_beveridge_curve(const Network& network, std::span<const double> d0,
                                     const ModelParams& params, double amplitude,
                                     const CycleSpec& cycle,
                                     const SteadyStateOptions& steady = {});

struct ScoreRow {
  double amplitude = 0.0;
  double deltaU = 0.0;
  double deltaV = 0.0;
  double dtWeeks = 0.0;
  double iou = 0.0;
  bool degenerate = false;  ///< no usable curve; iou is NaN
  std::string note;
};

struct CalibrationResult {
  ScoreRow best;
  ModelParams bestParams;
  std::vector<ScoreRow> table;  ///< lexicographic in (a, delta_u, delta_v, dt_weeks)
};

struct FitOptions {
  std::size_t resolution = kDefaultGridResolution;
  std::size_t jobs = 1;
  SteadyStateOptions steady;
};

/// Exhaustive search maximizing the curve overlap. Ties go to the
/// lexicographically smallest cell. Throws AllCellsDegenerate when no cell
/// yields a usable curve.
CalibrationResult fit_beveridge(const GridSpec& grid, const BeveridgeCurve& reference,
                                const Network& network, std::span<const double> d0,
                                const CycleSpec& cycle, const FitOptions& options = {});

/// Self-loop weight r = (x^(1/y) + u - 1) / u from the fraction x of workers
/// still in their occupation after a year, the unemployment rate u and
/// y steps per year. Throws RInfeasible when r falls outside [0, 1].
double infer_r(double stayFraction, double unemploymentRate, double stepsPerYear);

struct CyclicalityRow {
  double deltaU = 0.0;
  double deltaV = 0.0;
  double signedArea = 0.0;
};

/// Signed Beveridge area for every (delta_u, delta_v) pair, delta_u outer.
std::vector<CyclicalityRow> sweep_cyclicality(std::span<const double> deltaU,
                                              std::span<const double> deltaV,
                                              const ModelParams& base, const Network& network,
                                              std::span<const double> d0, double amplitude,
                                              const CycleSpec& cycle, std::size_t jobs = 1);

}  // namespace labornet
