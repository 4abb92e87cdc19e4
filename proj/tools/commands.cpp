#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>

#include "hash.hpp"
#include "labornet/abm.hpp"
#include "labornet/calibrate.hpp"
#include "labornet/error.hpp"
#include "labornet/io.hpp"
#include "labornet/meanfield.hpp"
#include "labornet/metrics.hpp"
#include "labornet/parallel.hpp"
#include "labornet/scenario.hpp"
#include "trace.hpp"

#ifndef LABORNET_VERSION
#define LABORNET_VERSION "unknown"
#endif
#ifndef LABORNET_BUILD_TYPE
#define LABORNET_BUILD_TYPE "unknown"
#endif

namespace labornet::cli {

namespace {

constexpr std::int64_t kDefaultSteps = 100;

// Input file read once, hashed, and parsed from the same bytes.
CsvTable load_table(const std::string& path, const std::string& role, Metadata& meta) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError(role + " file not found: " + path);
  }
  const std::string text = read_text_file(path);
  meta.add("input." + role, path);
  meta.add("input." + role + ".sha1", git_blob_sha1(text));
  return parse_csv(text, path);
}

Metadata base_metadata(const Invocation& inv) {
  Metadata m;
  m.add("command", inv.command);
  m.add("version", version_string());
  m.add("argv", inv.argv);
  return m;
}

void add_config(Metadata& m, const RunConfig& cfg) {
  if (cfg.source.empty()) return;
  m.add("config", cfg.source);
  m.add("config.sha1", git_blob_sha1(read_text_file(cfg.source)));
}

void add_params(Metadata& m, const ModelParams& p, std::size_t spellBins) {
  m.add("delta_u", format_double(p.deltaU));
  m.add("delta_v", format_double(p.deltaV));
  m.add("gamma_u", format_double(p.gammaU));
  m.add("gamma_v", format_double(p.gammaV));
  m.add("dt_weeks", format_double(p.dtWeeks));
  m.add("tau_steps", std::to_string(p.tauSteps));
  m.add("spell_bins", std::to_string(spellBins));
  m.add("labor_force", format_double(p.laborForce));
}

void add_conventions(Metadata& m) {
  m.add("u_rate", "U/(U+E)");
  m.add("v_rate", "V/(V+E)");
  m.add("window_average", "ratio_of_sums");
}

// Writes through a temporary stream into `path`, or to stdout when path is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  fn(out);
  out.close();
  if (!out) throw Error(ErrorKind::Io, "error writing " + path);
}

struct Inputs {
  Network network = complete_network(1);
  std::vector<double> d0;
  double laborForce = 0.0;
};

Inputs load_inputs(RunConfig& cfg, Metadata& meta) {
  Inputs in;
  const auto& nc = cfg.network;
  if (!nc.file.empty()) {
    in.network = read_network(load_table(cfg.resolve(nc.file), "network", meta));
  } else if (nc.complete > 0) {
    in.network = complete_network(nc.complete);
    meta.add("network", "complete n=" + std::to_string(nc.complete));
  } else {
    const auto counts = read_transitions(load_table(cfg.resolve(nc.transitions), "transitions", meta));
    in.network = build_network(counts, *nc.selfLoop);
    meta.add("self_loop", format_double(*nc.selfLoop));
  }
  const auto& labels = in.network.labels();
  if (!cfg.demand.file.empty()) {
    in.d0 = read_demand(load_table(cfg.resolve(cfg.demand.file), "demand", meta), labels);
  } else {
    in.d0.assign(labels.size(), *cfg.demand.uniform);
    meta.add("demand", "uniform " + format_double(*cfg.demand.uniform));
  }
  double total = std::accumulate(in.d0.begin(), in.d0.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "total target demand must be positive");
  if (cfg.demand.laborForce) {
    const double f = *cfg.demand.laborForce / total;
    for (double& d : in.d0) d *= f;
    total = *cfg.demand.laborForce;
  }
  in.laborForce = total;
  cfg.params.laborForce = total;
  if (!(total >= 1.0)) throw ConfigError("labor force (total target demand) must be at least 1");
  return in;
}

std::size_t spell_bins(const RunConfig& cfg) {
  return cfg.spellBins ? cfg.spellBins : default_spell_bins(cfg.params.tauSteps);
}

SteadyState steady_for(const RunConfig& cfg, const Inputs& in, Metadata& meta) {
  SteadyState s = solve_steady_state(in.network, in.d0, cfg.params, cfg.steady, spell_bins(cfg));
  meta.add("steady.tol", format_double(cfg.steady.tol));
  meta.add("steady.damping", format_double(cfg.steady.damping));
  meta.add("steady.residual", format_double(s.residual));
  meta.add("steady.iterations", std::to_string(s.iterations));
  return s;
}

ScoreVector load_scores(const RunConfig& cfg, const Inputs& in, Metadata& meta) {
  const auto& sc = cfg.scenario.shock;
  if (!std::filesystem::exists(cfg.resolve(sc.scores))) {
    throw ConfigError("config: 'scenario.shock.scores' file not found: " + cfg.resolve(sc.scores));
  }
  const auto raw = read_scores(load_table(cfg.resolve(sc.scores), "scores", meta));
  std::vector<CrosswalkRow> crosswalk;
  if (!sc.crosswalk.empty()) {
    crosswalk = read_crosswalk(load_table(cfg.resolve(sc.crosswalk), "crosswalk", meta));
  } else {
    for (const auto& l : in.network.labels()) crosswalk.push_back({l, l});
  }
  ScoreVector p = map_scores(raw, crosswalk, in.network.labels());
  meta.add("surrogate", sc.surrogate);
  if (sc.surrogate == "shuffle") {
    meta.add("surrogate_seed", std::to_string(sc.surrogateSeed));
    p = shuffle_scores(p, sc.surrogateSeed);
  } else if (sc.surrogate == "assortative") {
    p = assortative_scores<std::string>(p, in.network.labels());
  }
  return p;
}

DemandPath build_path(const RunConfig& cfg, const Inputs& in, const SteadyState* steady,
                      std::int64_t steps, Metadata& meta) {
  const auto& sc = cfg.scenario;
  const double spy = cfg.params.steps_per_year();
  if (sc.type == "constant") {
    DemandPath p = constant_path(in.d0, steps);
    meta.add("scenario", p.description());
    return p;
  }
  if (sc.type == "sine") {
    DemandPath p = sine_path(in.d0, sc.cycle.amplitude, sc.cycle.periodYears, spy, steps,
                             sc.cycle.phaseYears);
    meta.add("scenario", p.description());
    return p;
  }
  const ScoreVector p = load_scores(cfg, in, meta);
  const auto dPost = post_shock_demand(steady->state.employed, p, in.laborForce);
  ShockSpec spec = ShockSpec::from_years(sc.shock.startStep, sc.shock.midpointYears,
                                         sc.shock.steepnessPerYear, spy);
  spec.aggregateScale = sc.shock.aggregateScale;
  DemandPath path = sigmoid_path(in.d0, dPost, spec, steps);
  meta.add("scenario", path.description());
  return path;
}

std::string replica_path(const std::string& out, std::size_t r, std::size_t count) {
  const std::filesystem::path p(out);
  char tag[32];
  const int width = static_cast<int>(std::to_string(count - 1).size());
  std::snprintf(tag, sizeof tag, ".rep%0*zu", width, r);
  return (p.parent_path() / (p.stem().string() + tag + p.extension().string())).string();
}

}  // namespace

std::string version_string() {
  return std::string("labornet ") + LABORNET_VERSION + " (" + LABORNET_BUILD_TYPE + ", " +
#if defined(__clang__)
         "clang " + __clang_version__ +
#elif defined(__GNUC__)
         "gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__) + "." +
         std::to_string(__GNUC_PATCHLEVEL__) +
#else
         "unknown compiler" +
#endif
         ")";
}

int cmd_build_net(const BuildNetOptions& opt, const Invocation& inv) {
  Metadata meta = base_metadata(inv);
  double r = 0.0;
  if (opt.selfLoop) {
    r = *opt.selfLoop;
  } else {
    if (!(opt.dtWeeks > 0.0)) throw ConfigError("--dt-weeks must be positive");
    r = infer_r(*opt.stayFraction, *opt.unemploymentRate, 52.0 / opt.dtWeeks);
    meta.add("stay_fraction", format_double(*opt.stayFraction));
    meta.add("unemployment_rate", format_double(*opt.unemploymentRate));
    meta.add("dt_weeks", format_double(opt.dtWeeks));
  }
  if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("--r must lie in [0, 1]");
  const auto counts = read_transitions(load_table(opt.transitions, "transitions", meta));
  const Network net = build_network(counts, r);
  emit(opt.out, [&](std::ostream& out) { write_network(out, net, meta); });
  return kExitOk;
}

int cmd_run(RunConfig cfg, const Invocation& inv) {
  finalize(cfg);
  if (!cfg.output.trace.empty() && cfg.engine.type != "abm") {
    throw ConfigError("a step trace needs the abm engine");
  }
  if (!cfg.output.trace.empty() && cfg.engine.ensemble > 1) {
    throw ConfigError("a step trace is only written for a single run, not an ensemble");
  }
  Metadata meta = base_metadata(inv);
  add_config(meta, cfg);
  const Inputs in = load_inputs(cfg, meta);
  const std::int64_t steps = cfg.scenario.steps.value_or(kDefaultSteps);
  add_params(meta, cfg.params, spell_bins(cfg));
  const SteadyState steady = steady_for(cfg, in, meta);
  const DemandPath path = build_path(cfg, in, &steady, steps, meta);
  meta.add("steps", std::to_string(steps));
  meta.add("engine", cfg.engine.type);
  add_conventions(meta);
  const auto& labels = in.network.labels();
  const bool perOcc = cfg.output.perOccupation;

  if (cfg.engine.type == "meanfield") {
    meta.add("initial_state", "steady_state");
    const Trajectory t = run_meanfield(steady.state, path, in.network, cfg.params, steps, perOcc);
    emit(cfg.output.path, [&](std::ostream& out) { write_series(out, t, labels, meta); });
    return kExitOk;
  }

  const auto workers = static_cast<std::int64_t>(std::llround(in.laborForce));
  const LaborState init = round_to_labor_state(steady.state, workers);
  meta.add("initial_state", "steady_state_rounded");
  const std::uint64_t seed = *cfg.engine.seed;
  meta.add("seed", std::to_string(seed));

  if (cfg.engine.ensemble == 1) {
    std::unique_ptr<TraceWriter> trace;
    SimulationOptions opts;
    opts.perOccupation = perOcc;
    if (!cfg.output.trace.empty()) {
      trace = std::make_unique<TraceWriter>(cfg.output.trace, meta);
      opts.observer = [&](const StepRecord& rec) { trace->write(rec); };
    }
    const Trajectory t = run_simulation(init, path, in.network, cfg.params, steps, seed, opts);
    if (trace) trace->close();
    emit(cfg.output.path, [&](std::ostream& out) { write_series(out, t, labels, meta); });
    return kExitOk;
  }

  const std::size_t n = cfg.engine.ensemble;
  meta.add("ensemble", std::to_string(n));
  meta.add("replica_seed", "mix(seed, replica)");
  std::vector<Trajectory> runs(n);
  parallel_for(n, cfg.engine.jobs, [&](std::size_t r) {
    SimulationOptions opts;
    opts.perOccupation = perOcc;
    runs[r] = run_simulation(init, path, in.network, cfg.params, steps, replica_seed(seed, r), opts);
  });
  for (std::size_t r = 0; r < n; ++r) {
    Metadata m = meta;
    m.add("replica", std::to_string(r));
    m.add("replica_seed_value", std::to_string(replica_seed(seed, r)));
    emit(replica_path(cfg.output.path, r, n),
         [&](std::ostream& out) { write_series(out, runs[r], labels, m); });
  }
  // Mean over replicas, summed in replica order.
  Trajectory mean = runs[0];
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t t = 0; t < mean.aggregate.size(); ++t) {
      auto& a = mean.aggregate[t];
      const auto& b = runs[r].aggregate[t];
      a.unemployed += b.unemployed;
      a.vacancies += b.vacancies;
      a.employed += b.employed;
      a.longTermUnemployed += b.longTermUnemployed;
      if (perOcc) {
        auto& oa = mean.occupations[t];
        const auto& ob = runs[r].occupations[t];
        for (std::size_t i = 0; i < oa.employed.size(); ++i) {
          oa.employed[i] += ob.employed[i];
          oa.unemployed[i] += ob.unemployed[i];
          oa.vacancies[i] += ob.vacancies[i];
          oa.longTermUnemployed[i] += ob.longTermUnemployed[i];
        }
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < mean.aggregate.size(); ++t) {
    auto& a = mean.aggregate[t];
    a.unemployed *= inv_n;
    a.vacancies *= inv_n;
    a.employed *= inv_n;
    a.longTermUnemployed *= inv_n;
    if (perOcc) {
      auto& o = mean.occupations[t];
      for (auto* col : {&o.employed, &o.unemployed, &o.vacancies, &o.longTermUnemployed}) {
        for (double& x : *col) x *= inv_n;
      }
    }
  }
  meta.add("aggregate", "replica_mean");
  emit(cfg.output.path, [&](std::ostream& out) { write_series(out, mean, labels, meta); });
  return kExitOk;
}

int cmd_steady(RunConfig cfg, const Invocation& inv) {
  finalize(cfg);
  Metadata meta = base_metadata(inv);
  add_config(meta, cfg);
  const Inputs in = load_inputs(cfg, meta);
  add_params(meta, cfg.params, spell_bins(cfg));
  const SteadyState s = steady_for(cfg, in, meta);
  double u = 0.0, e = 0.0, v = 0.0;
  for (std::size_t i = 0; i < s.state.size(); ++i) {
    u += s.state.unemployed[i];
    e += s.state.employed[i];
    v += s.state.vacancies[i];
  }
  add_conventions(meta);
  meta.add("u_rate_aggregate", format_double(u / (u + e)));
  meta.add("v_rate_aggregate", format_double(v + e > 0.0 ? v / (v + e) : 0.0));
  emit(cfg.output.path, [&](std::ostream& out) { write_steady(out, s, in.network.labels(), meta); });
  if (!cfg.output.path.empty()) {
    std::cout << "u_rate=" << format_double(u / (u + e)) << "\niterations=" << s.iterations
              << "\nresidual=" << format_double(s.residual) << '\n';
  }
  return kExitOk;
}

int cmd_beveridge(const BeveridgeOptions& opt, const Invocation& inv) {
  Metadata meta = base_metadata(inv);
  const BeveridgeCurve curve = read_curve(load_table(opt.series, "series", meta));
  const double area = signed_area(curve);
  std::cout << "points=" << curve.size() << '\n'
            << "signed_area=" << format_double(area) << '\n'
            << "direction=" << to_string(cycle_direction(area)) << '\n';
  if (!opt.reference.empty()) {
    const BeveridgeCurve ref = read_curve(load_table(opt.reference, "reference", meta));
    const std::size_t res = opt.resolution ? opt.resolution : kDefaultGridResolution;
    const OverlapReport rep = curve_overlap_report(curve, ref, res);
    std::cout << "iou=" << format_double(rep.iou) << '\n'
              << "grid_error=" << format_double(rep.gridError) << '\n'
              << "resolution=" << res << '\n';
  }
  if (!opt.out.empty()) {
    RateSeries rates;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      rates.t.push_back(static_cast<std::int64_t>(k));
      rates.aggregate.push_back({curve.points[k].u, curve.points[k].v, 0.0});
    }
    meta.add("signed_area", format_double(area));
    emit(opt.out, [&](std::ostream& out) { write_curve(out, rates, meta); });
  }
  return kExitOk;
}

int cmd_calibrate(RunConfig cfg, const std::string& reference, const Invocation& inv) {
  finalize(cfg);
  Metadata meta = base_metadata(inv);
  add_config(meta, cfg);
  const Inputs in = load_inputs(cfg, meta);
  const BeveridgeCurve ref = read_curve(load_table(reference, "reference", meta));
  const auto& c = cfg.calibrate;
  GridSpec grid{c.amplitude, c.deltaU, c.deltaV, c.dtWeeks, cfg.params};
  try {
    grid.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: calibrate: ") + e.what());
  }
  auto axis = [](const GridAxis& a) {
    return format_double(a.min) + ":" + format_double(a.max) + ":" + std::to_string(a.count);
  };
  meta.add("grid.a", axis(c.amplitude));
  meta.add("grid.delta_u", axis(c.deltaU));
  meta.add("grid.delta_v", axis(c.deltaV));
  meta.add("grid.dt_weeks", axis(c.dtWeeks));
  meta.add("gamma_u", format_double(cfg.params.gammaU));
  meta.add("gamma_v", format_double(cfg.params.gammaV));
  meta.add("labor_force", format_double(cfg.params.laborForce));
  meta.add("period_years", format_double(c.cycle.periodYears));
  meta.add("warmup_cycles", std::to_string(c.cycle.warmupCycles));
  meta.add("phase_years", format_double(c.cycle.phaseYears));
  meta.add("resolution", std::to_string(c.resolution));
  meta.add("objective", "maximize_iou");
  add_conventions(meta);

  FitOptions fo;
  fo.resolution = c.resolution;
  fo.jobs = cfg.engine.jobs;
  fo.steady = cfg.steady;
  const CalibrationResult res = fit_beveridge(grid, ref, in.network, in.d0, c.cycle, fo);
  const auto& b = res.best;
  meta.add("best.a", format_double(b.amplitude));
  meta.add("best.delta_u", format_double(b.deltaU));
  meta.add("best.delta_v", format_double(b.deltaV));
  meta.add("best.dt_weeks", format_double(b.dtWeeks));
  meta.add("best.iou", format_double(b.iou));
  std::size_t degenerate = 0;
  for (const auto& row : res.table) degenerate += row.degenerate;
  meta.add("degenerate_cells", std::to_string(degenerate));
  emit(cfg.output.path, [&](std::ostream& out) { write_score_table(out, res, meta); });
  if (!cfg.output.path.empty()) {
    std::cout << "a=" << format_double(b.amplitude) << "\ndelta_u=" << format_double(b.deltaU)
              << "\ndelta_v=" << format_double(b.deltaV)
              << "\ndt_weeks=" << format_double(b.dtWeeks) << "\niou=" << format_double(b.iou)
              << "\ndegenerate_cells=" << degenerate << '\n';
  }
  return kExitOk;
}

int cmd_scenario_export(RunConfig cfg, const Invocation& inv) {
  finalize(cfg);
  Metadata meta = base_metadata(inv);
  add_config(meta, cfg);
  const Inputs in = load_inputs(cfg, meta);
  const std::int64_t steps = cfg.scenario.steps.value_or(kDefaultSteps);
  add_params(meta, cfg.params, spell_bins(cfg));
  std::optional<SteadyState> steady;
  if (cfg.scenario.type == "sigmoid") steady = steady_for(cfg, in, meta);
  const DemandPath path = build_path(cfg, in, steady ? &*steady : nullptr, steps, meta);
  meta.add("steps", std::to_string(steps));
  emit(cfg.output.path,
       [&](std::ostream& out) { write_demand(out, path, in.network.labels(), meta); });
  return kExitOk;
}

}  // namespace labornet::cli
