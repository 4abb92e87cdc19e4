#pragma once

// Deterministic large-population dynamics. Every quantity is the expected
// value of its stochastic counterpart under the exponential approximation of
// urn matching.

#include <cstdint>
#include <span>
#include <vector>

#include "labornet/matrix.hpp"
#include "labornet/network.hpp"
#include "labornet/params.hpp"
#include "labornet/scenario.hpp"
#include "labornet/state.hpp"
#include "labornet/trajectory.hpp"

namespace labornet {

/// (1 - exp(-x)) / x, with the limit 1 at x = 0.
double match_factor(double x) noexcept;

/// s_j = sum_i u_i v_j A_ij / sum_k v_k A_ik. Origins facing no vacancies send nothing.
std::vector<double> expected_applications(std::span<const double> u, std::span<const double> v,
                                          const Network& network);

/// Full matrix of expected hires f_ij from occupation i into j.
DenseMatrix<double> expected_flows(std::span<const double> u, std::span<const double> v,
                                   const Network& network);

struct FlowTotals {
  std::vector<double> inflow;   ///< sum_i f_ij, hires into j
  std::vector<double> outflow;  ///< sum_j f_ij, hires out of unemployment in i
};

/// Row and column sums of expected_flows in O(n^2) without the matrix.
FlowTotals expected_flow_totals(std::span<const double> u, std::span<const double> v,
                                const Network& network);

struct MeanStepRecord {
  std::vector<double> separations;
  std::vector<double> openings;
  FlowTotals flows;
};

/// One step of the expected dynamics under target demand `target`.
/// Throws NegativeStateComponent when a component drops below
/// -1e-9 max(1, |previous|); smaller negatives are clamped to zero.
MeanState meanfield_step(const MeanState& state, std::span<const double> target,
                         const Network& network, const ModelParams& params,
                         MeanStepRecord* record = nullptr);

/// Spell histogram update for one occupation. Every spell survives with
/// probability 1 - outflow / uPrev; bin 0 receives the new separations.
void ltu_step(std::span<double> spells, double uPrev, double outflow, double separations);

/// Realized demand at which openings balance separations for employment `employed`:
/// d* = d - (du - dv) e / (gv (1 - dv)) when du >= dv, d + (dv - du) e / (gu (1 - du)) otherwise.
double steady_realized_demand(double target, double employed, const ModelParams& params);

struct SteadyStateOptions {
  double tol = 1e-10;
  std::int64_t maxIter = 1'000'000;
  double damping = 1.0;  ///< x <- (1 - damping) x + damping step(x)
};

struct SteadyState {
  MeanState state;
  std::vector<double> dStar;  ///< e* + v*
  double residual = 0.0;      ///< max-norm one-step drift divided by L/n
  std::int64_t iterations = 0;
};

/// Forward iteration from e = d, u = v = 0 under constant target `target`
/// until the one-step drift, in units of L/n workers, is below `tol`.
/// Throws NoConvergenceError with the last residual otherwise.
SteadyState solve_steady_state(const Network& network, std::span<const double> target,
                               const ModelParams& params, const SteadyStateOptions& options = {},
                               std::size_t spellBins = 0);

/// Deterministic counterpart of run_simulation.
Trajectory run_meanfield(const MeanState& initial, const DemandPath& path,
                         const Network& network, const ModelParams& params, std::int64_t steps,
                         bool perOccupation = false);

void append_snapshot(Trajectory& out, const MeanState& state, std::int64_t t, std::int64_t tau,
                     bool perOccupation);

}  // namespace labornet
