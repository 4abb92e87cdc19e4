#include "labornet/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "labornet/error.hpp"
#include "labornet/parallel.hpp"
#include "labornet/scenario.hpp"

namespace labornet {

std::vector<double> GridAxis::values() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double step = (max - min) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = min + step * static_cast<double>(k);
  out.back() = max;
  return out;
}

void GridAxis::validate(const char* name) const {
  if (count < 1) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " grid needs at least one value");
  }
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " grid bounds must be finite");
  }
  if (count > 1 && !(min < max)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " grid needs min < max");
  }
}

void GridSpec::validate() const {
  amplitude.validate("amplitude");
  deltaU.validate("delta_u");
  deltaV.validate("delta_v");
  dtWeeks.validate("dt_weeks");
  if (amplitude.min < 0.0 || amplitude.max >= 1.0) {
    throw Error(ErrorKind::AmplitudeOutOfRange, "amplitude grid must lie in [0, 1)");
  }
  for (const auto* axis : {&deltaU, &deltaV}) {
    if (axis->min < 0.0 || axis->max > 1.0) {
      throw Error(ErrorKind::InvalidArgument, "delta grids must lie in [0, 1]");
    }
  }
  if (!(dtWeeks.min > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt_weeks grid must be positive");
  base.validate();
}

ModelParams cell_params(const ModelParams& base, double deltaU, double deltaV, double dtWeeks) {
  ModelParams p = base;
  p.deltaU = deltaU;
  p.deltaV = deltaV;
  p.dtWeeks = dtWeeks;
  p.tauSteps = long_term_threshold_steps(dtWeeks);
  return p;
}

BeveridgeCurve model_beveridge_curve(const Network& network, std::span<const double> d0,
                                     const ModelParams& params, double amplitude,
                                     const CycleSpec& cycle, const SteadyStateOptions& steady) {
  if (cycle.warmupCycles < 0) {
    throw Error(ErrorKind::InvalidArgument, "warm-up cycles must be non-negative");
  }
  const double spy = params.steps_per_year();
  const double period = cycle.periodYears * spy;
  const auto periodSteps = static_cast<std::int64_t>(std::lround(period));
  if (periodSteps < 3) throw Error(ErrorKind::InvalidArgument, "cycle is shorter than 3 steps");
  const auto steps = static_cast<std::int64_t>(
      std::ceil(period * static_cast<double>(cycle.warmupCycles + 1)));

  const SteadyState start = solve_steady_state(network, d0, params, steady);
  std::vector<double> base(d0.begin(), d0.end());
  const DemandPath path =
      sine_path(std::move(base), amplitude, cycle.periodYears, spy, steps, cycle.phaseYears);
  const Trajectory traj = run_meanfield(start.state, path, network, params, steps);
  const RateSeries rates = rates_from_series(traj);
  const std::size_t last = rates.aggregate.size();
  const std::size_t first = last - std::min<std::size_t>(last, static_cast<std::size_t>(periodSteps) + 1);
  return beveridge_curve(rates, first, last);
}

CalibrationResult fit_beveridge(const GridSpec& grid, const BeveridgeCurve& reference,
                                const Network& network, std::span<const double> d0,
                                const CycleSpec& cycle, const FitOptions& options) {
  grid.validate();
  if (reference.size() < 3) {
    throw Error(ErrorKind::TooFewPoints, "reference curve needs at least 3 points");
  }
  const auto as = grid.amplitude.values();
  const auto us = grid.deltaU.values();
  const auto vs = grid.deltaV.values();
  const auto ts = grid.dtWeeks.values();

  CalibrationResult result;
  result.table.resize(grid.cells());
  std::size_t k = 0;
  for (const double a : as)
    for (const double du : us)
      for (const double dv : vs)
        for (const double dt : ts) {
          auto& row = result.table[k++];
          row.amplitude = a;
          row.deltaU = du;
          row.deltaV = dv;
          row.dtWeeks = dt;
        }

  parallel_for(result.table.size(), options.jobs, [&](std::size_t c) {
    ScoreRow& row = result.table[c];
    try {
      const ModelParams p = cell_params(grid.base, row.deltaU, row.deltaV, row.dtWeeks);
      const BeveridgeCurve curve =
          model_beveridge_curve(network, d0, p, row.amplitude, cycle, options.steady);
      row.iou = curve_overlap(curve, reference, options.resolution);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateCurve && e.kind() != ErrorKind::NoConvergence &&
          e.kind() != ErrorKind::TooFewPoints && e.kind() != ErrorKind::NegativeStateComponent) {
        throw;
      }
      row.degenerate = true;
      row.iou = std::numeric_limits<double>::quiet_NaN();
      row.note = to_string(e.kind());
    }
  });

  const ScoreRow* best = nullptr;
  for (const auto& row : result.table) {
    if (row.degenerate) continue;
    if (!best || row.iou > best->iou) best = &row;
  }
  if (!best) throw Error(ErrorKind::AllCellsDegenerate, "no grid cell produced a usable curve");
  result.best = *best;
  result.bestParams = cell_params(grid.base, best->deltaU, best->deltaV, best->dtWeeks);
  return result;
}

double infer_r(double stayFraction, double unemploymentRate, double stepsPerYear) {
  if (!(stayFraction > 0.0 && stayFraction <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "stay fraction must lie in (0, 1]");
  }
  if (!(unemploymentRate > 0.0 && unemploymentRate < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "unemployment rate must lie in (0, 1)");
  }
  if (!(stepsPerYear > 0.0)) throw Error(ErrorKind::InvalidArgument, "steps per year must be positive");
  const double r = (std::pow(stayFraction, 1.0 / stepsPerYear) + unemploymentRate - 1.0) /
                   unemploymentRate;
  // Rounding in the formula may land a hair outside the range at its ends.
  constexpr double slack = 1e-12;
  if (!(r >= -slack && r <= 1.0 + slack)) {
    throw Error(ErrorKind::RInfeasible, "inferred self-loop weight " + std::to_string(r) +
                                            " lies outside [0, 1]");
  }
  return std::clamp(r, 0.0, 1.0);
}

std::vector<CyclicalityRow> sweep_cyclicality(std::span<const double> deltaU,
                                              std::span<const double> deltaV,
                                              const ModelParams& base, const Network& network,
                                              std::span<const double> d0, double amplitude,
                                              const CycleSpec& cycle, std::size_t jobs) {
  std::vector<CyclicalityRow> rows;
  for (const double du : deltaU)
    for (const double dv : deltaV) rows.push_back({du, dv, 0.0});
  parallel_for(rows.size(), jobs, [&](std::size_t k) {
    const ModelParams p = cell_params(base, rows[k].deltaU, rows[k].deltaV, base.dtWeeks);
    rows[k].signedArea = signed_area(model_beveridge_curve(network, d0, p, amplitude, cycle));
  });
  return rows;
}

}  // namespace labornet
