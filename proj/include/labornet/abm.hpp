#pragma once

// Exact stochastic simulation of the agent-level model.
//
// A step runs in four phases:
//   1. separations and openings, omega ~ Bin(e, pi_u), nu ~ Bin(e, pi_v),
//      using the realized demand d = e + v of the current state;
//   2. every worker who was already unemployed sends one application, to
//      occupation j with probability v_j A_ij / sum_l v_l A_il over the
//      pre-step vacancy stock (workers facing no vacancies abstain);
//   3. urn matching inside each occupation: applicants pick one of its v_j
//      vacancies uniformly, every vacancy with applicants hires one of them
//      uniformly;
//   4. state update. Workers separated in phase 1 start a spell of length 1
//      and cannot apply until the next step; vacancies opened in phase 1 take
//      applications from the next step on.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "labornet/network.hpp"
#include "labornet/params.hpp"
#include "labornet/random.hpp"
#include "labornet/scenario.hpp"
#include "labornet/state.hpp"
#include "labornet/trajectory.hpp"

namespace labornet {

struct Adjustment {
  double alphaU = 0.0;
  double alphaV = 0.0;
};

/// State-dependent adjustment probabilities, clipped to 1. Zero when
/// `employed` is zero (there are no trials to adjust).
Adjustment adjustment_probabilities(double employed, double realized, double target,
                                    const ModelParams& params);

struct EventProbabilities {
  double separation = 0.0;  ///< pi_u = delta_u + alpha_u - delta_u alpha_u
  double opening = 0.0;     ///< pi_v = delta_v + alpha_v - delta_v alpha_v
};

EventProbabilities combined_probabilities(double alphaU, double alphaV,
                                          const ModelParams& params);

struct Flow {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::int64_t count = 0;

  friend bool operator==(const Flow&, const Flow&) = default;
};

struct StepRecord {
  std::int64_t t = 0;  ///< step index; the record describes t -> t + 1
  std::vector<std::int64_t> separations;
  std::vector<std::int64_t> openings;
  std::vector<std::int64_t> rescued;  ///< vacancies opened by the rescue rule
  std::vector<Flow> applications;     ///< s_ij, sorted by (from, to), nonzero only
  std::vector<Flow> hires;            ///< f_ij, sorted by (from, to), nonzero only
  std::vector<std::int64_t> hiresInto;
  std::vector<std::int64_t> hiresFrom;
};

/// An occupation with no workers, no vacancies and positive target demand
/// gets one vacancy. Returns the per-occupation count opened (0 or 1).
std::vector<std::int64_t> rescue_rule(LaborState& state, std::span<const double> target);

/// Urn matching within one occupation.
class UrnMatcher {
 public:
  /// Each applicant id lands in one of `urns` urns uniformly; each occupied
  /// urn keeps one of its occupants uniformly (reservoir sampling). Winner ids
  /// are written to `winners` in order of each urn's first arrival.
  void match(std::span<const std::uint32_t> applicants, std::int64_t urns, Xoshiro256& rng,
             std::vector<std::uint32_t>& winners);

 private:
  std::vector<std::uint32_t> occupancy_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::uint32_t> touched_;
};

/// Step function with reusable scratch space. Holds a reference to the
/// network, which must outlive it.
class StochasticEngine {
 public:
  StochasticEngine(const Network& network, const ModelParams& params, std::uint64_t seed);

  /// Advance `state` by one step under `target` (the target demand at step t).
  StepRecord step(LaborState& state, std::span<const double> target, std::int64_t t);

  const RandomStreams& streams() const noexcept { return streams_; }

 private:
  const Network& network_;
  ModelParams params_;
  RandomStreams streams_;
  UrnMatcher matcher_;
  std::vector<std::vector<std::uint32_t>> applicants_;
  std::vector<std::uint32_t> winners_;
  std::vector<double> cumulative_;
  std::vector<std::uint32_t> destinations_;
};

struct StepOutcome {
  LaborState state;
  StepRecord record;
};

StepOutcome stochastic_step(const LaborState& state, std::span<const double> target,
                            const Network& network, const ModelParams& params,
                            std::uint64_t seed, std::int64_t t);

struct SimulationOptions {
  bool perOccupation = false;
  std::function<void(const StepRecord&)> observer;
};

/// Run `steps` steps from `initial`. Deterministic in (inputs, seed).
/// Throws HorizonExceedsPath when the path is shorter than `steps`.
Trajectory run_simulation(const LaborState& initial, const DemandPath& path,
                          const Network& network, const ModelParams& params,
                          std::int64_t steps, std::uint64_t seed,
                          const SimulationOptions& options = {});

/// Aggregate (and optionally per-occupation) snapshot of an integer state.
void append_snapshot(Trajectory& out, const LaborState& state, std::int64_t t,
                     std::int64_t tau, bool perOccupation);

}  // namespace labornet
