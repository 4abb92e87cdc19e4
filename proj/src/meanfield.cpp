#include "labornet/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "labornet/error.hpp"

namespace labornet {

namespace {

struct Routing {
  std::vector<double> ratio;    // u_i / sum_k v_k A_ik, zero when nothing is reachable
  std::vector<double> density;  // x_j = sum_i ratio_i A_ij, applications per vacancy
};

Routing route(std::span<const double> u, std::span<const double> v, const Network& network) {
  const std::size_t n = network.size();
  if (u.size() != n || v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "state and network differ in size");
  }
  Routing r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] > 0.0)) continue;
    const auto a = network.row(i);
    double w = 0.0;
    for (std::size_t k = 0; k < n; ++k) w += v[k] * a[k];
    if (w > 0.0) r.ratio[i] = u[i] / w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.ratio[i] == 0.0) continue;
    const auto a = network.row(i);
    for (std::size_t j = 0; j < n; ++j) r.density[j] += r.ratio[i] * a[j];
  }
  return r;
}

double settle(double next, double prev, const char* what, std::size_t i) {
  if (next >= 0.0) return next;
  if (next < -1e-9 * std::max(1.0, std::abs(prev))) {
    throw Error(ErrorKind::NegativeStateComponent,
                std::string(what) + " of occupation " + std::to_string(i) +
                    " went negative (" + std::to_string(next) + ")");
  }
  return 0.0;
}

}  // namespace

double match_factor(double x) noexcept {
  if (x < 1e-6) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

std::vector<double> expected_applications(std::span<const double> u, std::span<const double> v,
                                          const Network& network) {
  const Routing r = route(u, v, network);
  std::vector<double> s(r.density.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = v[j] * r.density[j];
  return s;
}

DenseMatrix<double> expected_flows(std::span<const double> u, std::span<const double> v,
                                   const Network& network) {
  const std::size_t n = network.size();
  const Routing r = route(u, v, network);
  std::vector<double> perVacancy(n);
  for (std::size_t j = 0; j < n; ++j) perVacancy[j] = v[j] * match_factor(r.density[j]);
  DenseMatrix<double> f(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (r.ratio[i] == 0.0) continue;
    const auto a = network.row(i);
    auto out = f.row(i);
    for (std::size_t j = 0; j < n; ++j) out[j] = r.ratio[i] * a[j] * perVacancy[j];
  }
  return f;
}

FlowTotals expected_flow_totals(std::span<const double> u, std::span<const double> v,
                                const Network& network) {
  const std::size_t n = network.size();
  const Routing r = route(u, v, network);
  FlowTotals t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<double> perVacancy(n);
  for (std::size_t j = 0; j < n; ++j) {
    perVacancy[j] = v[j] * match_factor(r.density[j]);
    t.inflow[j] = perVacancy[j] * r.density[j];  // v_j (1 - exp(-x_j))
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.ratio[i] == 0.0) continue;
    const auto a = network.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[j] * perVacancy[j];
    t.outflow[i] = r.ratio[i] * acc;
  }
  return t;
}

void ltu_step(std::span<double> spells, double uPrev, double outflow, double separations) {
  if (spells.empty()) return;
  double survive = 1.0;
  if (uPrev > 0.0) survive = std::clamp(1.0 - outflow / uPrev, 0.0, 1.0);
  const std::size_t bins = spells.size();
  const double overflow = spells[bins - 1] * survive;
  for (std::size_t k = bins - 1; k > 0; --k) spells[k] = spells[k - 1] * survive;
  if (bins > 1) {
    spells[bins - 1] += overflow;
    spells[0] = separations;
  } else {
    spells[0] = overflow + separations;
  }
}

MeanState meanfield_step(const MeanState& state, std::span<const double> target,
                         const Network& network, const ModelParams& params,
                         MeanStepRecord* record) {
  const std::size_t n = state.size();
  if (target.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "target demand and state differ in length");
  }
  FlowTotals flows = expected_flow_totals(state.unemployed, state.vacancies, network);
  MeanState next = state;
  std::vector<double> separations(n);
  std::vector<double> openings(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = state.employed[i];
    const double gap = e + state.vacancies[i] - target[i];
    // The adjustment is capped at e, as alpha is capped at 1 in the stochastic engine.
    separations[i] =
        params.deltaU * e + (1.0 - params.deltaU) * std::min(e, params.gammaU * std::max(0.0, gap));
    openings[i] =
        params.deltaV * e + (1.0 - params.deltaV) * std::min(e, params.gammaV * std::max(0.0, -gap));

    next.employed[i] = settle(e - separations[i] + flows.inflow[i], e, "employment", i);
    next.unemployed[i] = settle(state.unemployed[i] + separations[i] - flows.outflow[i],
                                state.unemployed[i], "unemployment", i);
    next.vacancies[i] = settle(state.vacancies[i] + openings[i] - flows.inflow[i],
                               state.vacancies[i], "vacancies", i);
    ltu_step(next.spells.row(i), state.unemployed[i], flows.outflow[i], separations[i]);
  }
  if (record) {
    record->separations = std::move(separations);
    record->openings = std::move(openings);
    record->flows = std::move(flows);
  }
  return next;
}

double steady_realized_demand(double target, double employed, const ModelParams& params) {
  const double gap = params.deltaU - params.deltaV;
  if (gap == 0.0) return target;
  if (gap > 0.0) {
    const double speed = params.gammaV * (1.0 - params.deltaV);
    if (!(speed > 0.0)) throw Error(ErrorKind::InvalidArgument, "gammaV must be positive");
    return target - gap / speed * employed;
  }
  const double speed = params.gammaU * (1.0 - params.deltaU);
  if (!(speed > 0.0)) throw Error(ErrorKind::InvalidArgument, "gammaU must be positive");
  return target - gap / speed * employed;
}

SteadyState solve_steady_state(const Network& network, std::span<const double> target,
                               const ModelParams& params, const SteadyStateOptions& options,
                               std::size_t spellBins) {
  params.validate();
  const std::size_t n = network.size();
  if (target.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "target demand and network differ in size");
  }
  for (const double d : target) {
    if (!(d >= 0.0)) throw Error(ErrorKind::InvalidArgument, "target demand must be non-negative");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "damping must lie in (0, 1]");
  }
  if (options.maxIter < 1) throw Error(ErrorKind::InvalidArgument, "maxIter must be positive");

  const std::size_t bins = spellBins ? spellBins : default_spell_bins(params.tauSteps);
  MeanState x(n, bins);
  std::copy(target.begin(), target.end(), x.employed.begin());
  const double total = std::accumulate(target.begin(), target.end(), 0.0);
  const double unit = total > 0.0 && n > 0 ? total / static_cast<double>(n) : 1.0;
  const double lambda = options.damping;

  double residual = 0.0;
  for (std::int64_t it = 1; it <= options.maxIter; ++it) {
    MeanState y = meanfield_step(x, target, network, params);
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      drift = std::max(drift, std::abs(y.employed[i] - x.employed[i]));
      drift = std::max(drift, std::abs(y.unemployed[i] - x.unemployed[i]));
      drift = std::max(drift, std::abs(y.vacancies[i] - x.vacancies[i]));
    }
    residual = drift / unit;
    if (residual < options.tol) {
      SteadyState out;
      out.dStar.resize(n);
      for (std::size_t i = 0; i < n; ++i) out.dStar[i] = x.employed[i] + x.vacancies[i];
      out.state = std::move(x);
      out.residual = residual;
      out.iterations = it;
      return out;
    }
    if (lambda == 1.0) {
      x = std::move(y);
    } else {
      auto blend = [lambda](std::span<double> a, std::span<const double> b) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = (1.0 - lambda) * a[k] + lambda * b[k];
      };
      blend(x.employed, y.employed);
      blend(x.unemployed, y.unemployed);
      blend(x.vacancies, y.vacancies);
      for (std::size_t i = 0; i < n; ++i) blend(x.spells.row(i), y.spells.row(i));
    }
  }
  throw NoConvergenceError(residual, options.maxIter);
}

void append_snapshot(Trajectory& out, const MeanState& state, std::int64_t t, std::int64_t tau,
                     bool perOccupation) {
  AggregatePoint p;
  p.t = t;
  OccupationPoint occ;
  if (perOccupation) {
    occ.employed = state.employed;
    occ.unemployed = state.unemployed;
    occ.vacancies = state.vacancies;
    occ.longTermUnemployed.resize(state.size());
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double lt = state.long_term(i, tau);
    p.employed += state.employed[i];
    p.unemployed += state.unemployed[i];
    p.vacancies += state.vacancies[i];
    p.longTermUnemployed += lt;
    if (perOccupation) occ.longTermUnemployed[i] = lt;
  }
  out.aggregate.push_back(p);
  if (perOccupation) out.occupations.push_back(std::move(occ));
}

Trajectory run_meanfield(const MeanState& initial, const DemandPath& path,
                         const Network& network, const ModelParams& params, std::int64_t steps,
                         bool perOccupation) {
  params.validate();
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "step count must be non-negative");
  if (steps > path.horizon()) {
    throw Error(ErrorKind::HorizonExceedsPath,
                "run needs " + std::to_string(steps) + " steps but the demand path has " +
                    std::to_string(path.horizon()));
  }
  if (path.size() != initial.size() || network.size() != initial.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state, network and demand path differ in size");
  }
  Trajectory out;
  out.aggregate.reserve(static_cast<std::size_t>(steps) + 1);
  MeanState state = initial;
  append_snapshot(out, state, 0, params.tauSteps, perOccupation);
  std::vector<double> target(initial.size());
  for (std::int64_t t = 0; t < steps; ++t) {
    path.evaluate(t, target);
    state = meanfield_step(state, target, network, params);
    append_snapshot(out, state, t + 1, params.tauSteps, perOccupation);
  }
  return out;
}

}  // namespace labornet
