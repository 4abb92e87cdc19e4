#include "labornet/abm.hpp"

#include <algorithm>
#include <string>

#include "labornet/error.hpp"

namespace labornet {

Adjustment adjustment_probabilities(double employed, double realized, double target,
                                    const ModelParams& params) {
  Adjustment a;
  if (!(employed > 0.0)) return a;
  const double gap = realized - target;
  if (gap > 0.0) {
    a.alphaU = std::min(1.0, params.gammaU * gap / employed);
  } else if (gap < 0.0) {
    a.alphaV = std::min(1.0, params.gammaV * -gap / employed);
  }
  return a;
}

EventProbabilities combined_probabilities(double alphaU, double alphaV,
                                          const ModelParams& params) {
  EventProbabilities p;
  p.separation = params.deltaU + alphaU - params.deltaU * alphaU;
  p.opening = params.deltaV + alphaV - params.deltaV * alphaV;
  return p;
}

std::vector<std::int64_t> rescue_rule(LaborState& state, std::span<const double> target) {
  if (target.size() != state.size()) {
    throw Error(ErrorKind::DimensionMismatch, "target demand and state differ in length");
  }
  std::vector<std::int64_t> opened(state.size(), 0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.employed[i] == 0 && state.vacancies[i] == 0 && target[i] > 0.0) {
      state.vacancies[i] = 1;
      opened[i] = 1;
    }
  }
  return opened;
}

void UrnMatcher::match(std::span<const std::uint32_t> applicants, std::int64_t urns,
                       Xoshiro256& rng, std::vector<std::uint32_t>& winners) {
  winners.clear();
  if (applicants.empty() || urns <= 0) return;
  const auto n = static_cast<std::size_t>(urns);
  if (occupancy_.size() < n) {
    occupancy_.resize(n, 0);
    chosen_.resize(n, 0);
  }
  touched_.clear();
  for (const std::uint32_t a : applicants) {
    const std::size_t urn = rng.uniform_index(n);
    const std::uint32_t k = ++occupancy_[urn];
    if (k == 1) {
      touched_.push_back(static_cast<std::uint32_t>(urn));
      chosen_[urn] = a;
    } else if (rng.uniform_index(k) == 0) {
      chosen_[urn] = a;
    }
  }
  winners.reserve(touched_.size());
  for (const std::uint32_t urn : touched_) {
    winners.push_back(chosen_[urn]);
    occupancy_[urn] = 0;
  }
}

StochasticEngine::StochasticEngine(const Network& network, const ModelParams& params,
                                   std::uint64_t seed)
    : network_(network), params_(params), streams_(seed) {
  params_.validate();
}

StepRecord StochasticEngine::step(LaborState& state, std::span<const double> target,
                                  std::int64_t t) {
  const std::size_t n = state.size();
  const std::size_t bins = state.unemployed.bins();
  if (n != network_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state and network differ in size");
  }
  const auto step = static_cast<std::uint64_t>(t);

  StepRecord rec;
  rec.t = t;
  rec.rescued = rescue_rule(state, target);
  rec.separations.assign(n, 0);
  rec.openings.assign(n, 0);
  rec.hiresInto.assign(n, 0);
  rec.hiresFrom.assign(n, 0);

  // Phase 1.
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = streams_.stream(step, StreamPhase::Separation, i);
    const auto e = static_cast<double>(state.employed[i]);
    const double d = e + static_cast<double>(state.vacancies[i]);
    const auto a = adjustment_probabilities(e, d, target[i], params_);
    const auto p = combined_probabilities(a.alphaU, a.alphaV, params_);
    rec.separations[i] = rng.binomial(state.employed[i], p.separation);
    rec.openings[i] = rng.binomial(state.employed[i], p.opening);
  }

  // Phase 2. Applicant ids pack (origin, spell bin).
  applicants_.resize(n);
  for (auto& a : applicants_) a.clear();
  std::vector<std::int64_t> sent(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (state.unemployed_in(i) == 0) continue;
    cumulative_.clear();
    destinations_.clear();
    double total = 0.0;
    const auto arow = network_.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = static_cast<double>(state.vacancies[j]) * arow[j];
      if (w > 0.0) {
        total += w;
        cumulative_.push_back(total);
        destinations_.push_back(static_cast<std::uint32_t>(j));
      }
    }
    if (destinations_.empty()) continue;
    auto rng = streams_.stream(step, StreamPhase::Routing, i);
    std::vector<std::uint32_t> touched;
    for (std::size_t k = 0; k < bins; ++k) {
      const auto id = static_cast<std::uint32_t>(i * bins + k);
      for (std::int64_t c = state.unemployed(i, k); c > 0; --c) {
        const std::uint32_t j = destinations_[rng.categorical(cumulative_)];
        applicants_[j].push_back(id);
        if (sent[j]++ == 0) touched.push_back(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const std::uint32_t j : touched) {
      rec.applications.push_back({static_cast<std::uint32_t>(i), j, sent[j]});
      sent[j] = 0;
    }
  }

  // Phase 3.
  SpellHistogram<std::int64_t> hired(n, bins);
  for (std::size_t j = 0; j < n; ++j) {
    if (applicants_[j].empty()) continue;
    auto rng = streams_.stream(step, StreamPhase::Matching, j);
    matcher_.match(applicants_[j], state.vacancies[j], rng, winners_);
    for (const std::uint32_t id : winners_) {
      const std::size_t i = id / bins;
      ++hired(i, id % bins);
      ++rec.hiresFrom[i];
      rec.hires.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 1});
    }
    rec.hiresInto[j] = static_cast<std::int64_t>(winners_.size());
  }
  std::sort(rec.hires.begin(), rec.hires.end(), [](const Flow& a, const Flow& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  std::vector<Flow> merged;
  for (const Flow& f : rec.hires) {
    if (!merged.empty() && merged.back().from == f.from && merged.back().to == f.to) {
      merged.back().count += f.count;
    } else {
      merged.push_back(f);
    }
  }
  rec.hires = std::move(merged);

  // Phase 4.
  for (std::size_t i = 0; i < n; ++i) {
    auto row = state.unemployed.row(i);
    const auto h = hired.row(i);
    const std::int64_t overflow = row[bins - 1] - h[bins - 1];
    for (std::size_t k = bins - 1; k > 0; --k) row[k] = row[k - 1] - h[k - 1];
    if (bins > 1) {
      row[bins - 1] += overflow;
    } else {
      row[0] = overflow;
    }
    if (bins > 1) {
      row[0] = rec.separations[i];
    } else {
      row[0] += rec.separations[i];
    }
    state.employed[i] += rec.hiresInto[i] - rec.separations[i];
    state.vacancies[i] += rec.openings[i] - rec.hiresInto[i];
  }
  return rec;
}

StepOutcome stochastic_step(const LaborState& state, std::span<const double> target,
                            const Network& network, const ModelParams& params,
                            std::uint64_t seed, std::int64_t t) {
  StepOutcome out{state, {}};
  StochasticEngine engine(network, params, seed);
  out.record = engine.step(out.state, target, t);
  return out;
}

void append_snapshot(Trajectory& out, const LaborState& state, std::int64_t t,
                     std::int64_t tau, bool perOccupation) {
  AggregatePoint p;
  p.t = t;
  OccupationPoint occ;
  if (perOccupation) {
    occ.employed.resize(state.size());
    occ.unemployed.resize(state.size());
    occ.vacancies.resize(state.size());
    occ.longTermUnemployed.resize(state.size());
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto e = static_cast<double>(state.employed[i]);
    const auto u = static_cast<double>(state.unemployed_in(i));
    const auto v = static_cast<double>(state.vacancies[i]);
    const auto lt = static_cast<double>(state.unemployed.at_least(i, tau));
    p.employed += e;
    p.unemployed += u;
    p.vacancies += v;
    p.longTermUnemployed += lt;
    if (perOccupation) {
      occ.employed[i] = e;
      occ.unemployed[i] = u;
      occ.vacancies[i] = v;
      occ.longTermUnemployed[i] = lt;
    }
  }
  out.aggregate.push_back(p);
  if (perOccupation) out.occupations.push_back(std::move(occ));
}

Trajectory run_simulation(const LaborState& initial, const DemandPath& path,
                          const Network& network, const ModelParams& params,
                          std::int64_t steps, std::uint64_t seed,
                          const SimulationOptions& options) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "step count must be non-negative");
  if (steps > path.horizon()) {
    throw Error(ErrorKind::HorizonExceedsPath,
                "simulation needs " + std::to_string(steps) + " steps but the demand path has " +
                    std::to_string(path.horizon()));
  }
  if (path.size() != initial.size() || network.size() != initial.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state, network and demand path differ in size");
  }
  initial.validate();

  Trajectory out;
  out.aggregate.reserve(static_cast<std::size_t>(steps) + 1);
  LaborState state = initial;
  append_snapshot(out, state, 0, params.tauSteps, options.perOccupation);
  StochasticEngine engine(network, params, seed);
  std::vector<double> target(initial.size());
  for (std::int64_t t = 0; t < steps; ++t) {
    path.evaluate(t, target);
    const StepRecord rec = engine.step(state, target, t);
    if (options.observer) options.observer(rec);
    append_snapshot(out, state, t + 1, params.tauSteps, options.perOccupation);
  }
  return out;
}

}  // namespace labornet
