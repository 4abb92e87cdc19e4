#pragma once

// Random end-to-end configurations for the conservation property.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "labornet/abm.hpp"
#include "labornet/meanfield.hpp"
#include "support/synthetic.hpp"

namespace labornet::testing {

struct ConservationCase {
  std::uint64_t seed = 0;
  std::size_t occupations = 0;
  std::int64_t laborForce = 0;
  std::int64_t steps = 0;
  std::string scenario;
};

struct ConservationResult {
  ConservationCase config;
  std::int64_t abmWorkerErrors = 0;   ///< steps where sum(e + u) != L
  double meanfieldRelError = 0.0;     ///< worst |sum(e + u) - L| / L
  std::int64_t ltuViolations = 0;     ///< steps (either engine) with LTU > U
  std::int64_t negativeCounts = 0;
};

inline DemandPath random_path(std::vector<double> d0, std::int64_t horizon, Xoshiro256& rng,
                              std::string& name) {
  const double spy = 52.0 / 6.75;
  switch (rng.uniform_index(3)) {
    case 0:
      name = "constant";
      return constant_path(std::move(d0), horizon);
    case 1: {
      name = "sigmoid";
      std::vector<double> post(d0.size());
      ScoreVector p;
      for (std::size_t i = 0; i < d0.size(); ++i) p.values.push_back(rng.uniform01() * 0.9);
      double L = 0.0;
      for (const double x : d0) L += x;
      post = post_shock_demand(d0, p, L);
      const auto spec = ShockSpec::from_years(static_cast<std::int64_t>(rng.uniform_index(5)),
                                              0.5 + rng.uniform01() * 3.0, 0.79, spy);
      return sigmoid_path(std::move(d0), std::move(post), spec, horizon);
    }
    default:
      name = "sine";
      return sine_path(std::move(d0), rng.uniform01() * 0.3, 1.0 + rng.uniform01() * 5.0, spy,
                       horizon);
  }
}

inline ConservationResult run_conservation_case(std::uint64_t seed) {
  Xoshiro256 rng(seed);
  ConservationResult res;
  auto& cfg = res.config;
  cfg.seed = seed;
  cfg.occupations = 2 + rng.uniform_index(14);
  cfg.steps = 10 + static_cast<std::int64_t>(rng.uniform_index(40));
  const std::size_t n = cfg.occupations;
  const Network net = synthetic_network(n, rng(), rng.uniform01());

  ModelParams p;
  p.deltaU = rng.uniform01() * 0.1;
  p.deltaV = rng.uniform01() * 0.1;
  p.gammaU = rng.uniform01();
  p.gammaV = rng.uniform01();
  p.tauSteps = 1 + static_cast<std::int64_t>(rng.uniform_index(6));
  const std::size_t bins = 1 + rng.uniform_index(12);

  LaborState s(n, bins);
  for (std::size_t i = 0; i < n; ++i) {
    // Some occupations start empty so the rescue rule gets exercised.
    if (rng.uniform01() < 0.15) continue;
    s.employed[i] = static_cast<std::int64_t>(rng.uniform_index(300));
    s.vacancies[i] = static_cast<std::int64_t>(rng.uniform_index(30));
    for (std::size_t b = 0; b < bins; ++b) s.unemployed(i, b) = static_cast<std::int64_t>(rng.uniform_index(8));
  }
  s.employed[0] += 1;
  cfg.laborForce = s.workers();
  p.laborForce = static_cast<double>(cfg.laborForce);

  std::vector<double> d0(n);
  for (double& x : d0) x = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01();
  d0[0] += 0.01;
  double sum = 0.0;
  for (const double x : d0) sum += x;
  for (double& x : d0) x *= p.laborForce / sum;
  const DemandPath path = random_path(d0, cfg.steps, rng, cfg.scenario);

  const std::uint64_t runSeed = rng();
  StochasticEngine engine(net, p, runSeed);
  LaborState a = s;
  MeanState m = to_mean_state(s);
  std::vector<double> target(n);
  const double L = p.laborForce;
  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    path.evaluate(t, target);
    engine.step(a, target, t);
    m = meanfield_step(m, target, net, p);
    if (a.workers() != cfg.laborForce) ++res.abmWorkerErrors;
    res.meanfieldRelError = std::max(res.meanfieldRelError, std::abs(m.workers() - L) / L);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.employed[i] < 0 || a.vacancies[i] < 0) ++res.negativeCounts;
      for (const auto c : a.unemployed.row(i)) res.negativeCounts += c < 0 ? 1 : 0;
      if (a.unemployed.at_least(i, p.tauSteps) > a.unemployed_in(i)) ++res.ltuViolations;
      if (m.long_term(i, p.tauSteps) > m.unemployed[i] * (1.0 + 1e-12) + 1e-12) ++res.ltuViolations;
      if (m.employed[i] < 0.0 || m.unemployed[i] < 0.0 || m.vacancies[i] < 0.0) ++res.negativeCounts;
    }
  }
  return res;
}

}  // namespace labornet::testing
