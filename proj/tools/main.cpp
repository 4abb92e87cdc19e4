#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "labornet/error.hpp"

using namespace labornet;
using namespace labornet::cli;

namespace {

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int k = 0; k < argc; ++k) {
    std::string a = argv[k];
    if (a.find_first_of(" \t\"") != std::string::npos) a = '"' + a + '"';
    out += (k ? " " : "") + a;
  }
  return out;
}

// Flags shared by commands that read a run config.
struct ConfigFlags {
  std::string config;
  std::string network;
  std::string demand;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "YAML run configuration");
    app->add_option("--network", network, "network file (overrides network.*)");
    app->add_option("--demand", demand, "target demand CSV occupation,demand (overrides demand.*)");
    app->add_option("--out", out, "output file (default: stdout)");
  }

  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
    if (!network.empty()) {
      cfg.network = NetworkConfig{};
      cfg.network.file = network;
    }
    if (!demand.empty()) {
      cfg.demand.file = demand;
      cfg.demand.uniform.reset();
    }
    if (!out.empty()) cfg.output.path = out;
    return cfg;
  }
};

// Command-line paths are relative to the working directory, config paths to
// the config file; the overrides above are stored as absolute paths.
std::string absolute(const std::string& p) {
  return p.empty() ? p : std::filesystem::absolute(p).lexically_normal().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupational mobility network labor market model"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Invocation inv;
  inv.argv = join_argv(argc, argv);

  BuildNetOptions bn;
  auto* buildNet = app.add_subcommand("build-net", "build a network file from transition counts");
  buildNet->add_option("--transitions", bn.transitions, "CSV source,target,count")->required();
  auto* rOpt = buildNet->add_option("--r", bn.selfLoop, "self-loop weight in [0, 1]");
  auto* xOpt = buildNet->add_option("--stay-fraction", bn.stayFraction,
                                    "annual fraction staying in their occupation (infers r)");
  auto* uOpt = buildNet->add_option("--unemployment-rate", bn.unemploymentRate,
                                    "unemployment rate used to infer r");
  buildNet->add_option("--dt-weeks", bn.dtWeeks, "step length in weeks used to infer r");
  buildNet->add_option("--out", bn.out, "network file (default: stdout)");
  rOpt->excludes(xOpt)->excludes(uOpt);
  xOpt->needs(uOpt);
  uOpt->needs(xOpt);

  ConfigFlags runFlags;
  std::string runEngine, runTrace, runScores;
  std::optional<std::uint64_t> runSeed;
  std::optional<std::int64_t> runSteps;
  std::optional<std::size_t> runEnsemble, runJobs;
  bool perOcc = false;
  auto* run = app.add_subcommand("run", "simulate a scenario");
  runFlags.attach(run);
  run->add_option("--engine", runEngine, "meanfield or abm")
      ->check(CLI::IsMember({"meanfield", "abm"}));
  run->add_option("--seed", runSeed, "seed for the abm engine");
  run->add_option("--steps", runSteps, "number of steps")->check(CLI::NonNegativeNumber);
  run->add_option("--scores", runScores, "automation scores CSV (overrides scenario.shock.scores)");
  run->add_option("--ensemble", runEnsemble, "number of abm replicas")->check(CLI::PositiveNumber);
  run->add_option("--jobs", runJobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--trace", runTrace, "gzip CSV of step records (abm, single run)");
  run->add_flag("--per-occupation", perOcc, "add per-occupation columns");

  ConfigFlags steadyFlags;
  std::optional<double> tol, damping;
  std::optional<std::int64_t> maxIter;
  auto* steady = app.add_subcommand("steady", "solve the mean-field steady state");
  steadyFlags.attach(steady);
  steady->add_option("--tol", tol, "tolerance on the one-step drift per L/n workers");
  steady->add_option("--max-iter", maxIter, "iteration limit");
  steady->add_option("--damping", damping, "damping in (0, 1]");

  BeveridgeOptions bev;
  auto* beveridge = app.add_subcommand("beveridge", "Beveridge curve geometry of a series");
  beveridge->add_option("--series", bev.series, "CSV with u_rate,v_rate or U,V,E")->required();
  beveridge->add_option("--reference", bev.reference, "reference curve for the overlap score");
  beveridge->add_option("--resolution", bev.resolution, "raster resolution")
      ->check(CLI::PositiveNumber);
  beveridge->add_option("--out", bev.out, "write the curve as t,u_rate,v_rate");

  ConfigFlags calFlags;
  std::string reference;
  std::optional<std::size_t> calJobs, calRes;
  auto* calibrate = app.add_subcommand("calibrate", "grid search against a reference curve");
  calFlags.attach(calibrate);
  calibrate->add_option("--reference", reference, "reference curve CSV")->required();
  calibrate->add_option("--jobs", calJobs, "worker threads")->check(CLI::PositiveNumber);
  calibrate->add_option("--resolution", calRes, "raster resolution")->check(CLI::PositiveNumber);

  auto* scenario = app.add_subcommand("scenario", "scenario tools");
  scenario->require_subcommand(1);
  ConfigFlags expFlags;
  std::optional<std::int64_t> expSteps;
  auto* exportCmd = scenario->add_subcommand("export", "write the target demand path");
  expFlags.attach(exportCmd);
  exportCmd->add_option("--steps", expSteps, "horizon in steps")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (buildNet->parsed()) {
      inv.command = "build-net";
      if (!bn.selfLoop && !bn.stayFraction) {
        throw ConfigError("build-net needs --r or --stay-fraction with --unemployment-rate");
      }
      return cmd_build_net(bn, inv);
    }
    if (run->parsed()) {
      inv.command = "run";
      RunConfig cfg = runFlags.load();
      if (!runFlags.network.empty()) cfg.network.file = absolute(runFlags.network);
      if (!runFlags.demand.empty()) cfg.demand.file = absolute(runFlags.demand);
      if (!runEngine.empty()) cfg.engine.type = runEngine;
      if (runSeed) cfg.engine.seed = runSeed;
      if (runSteps) cfg.scenario.steps = runSteps;
      if (!runScores.empty()) cfg.scenario.shock.scores = absolute(runScores);
      if (runEnsemble) cfg.engine.ensemble = *runEnsemble;
      if (runJobs) cfg.engine.jobs = *runJobs;
      if (!runTrace.empty()) cfg.output.trace = runTrace;
      if (perOcc) cfg.output.perOccupation = true;
      return cmd_run(std::move(cfg), inv);
    }
    if (steady->parsed()) {
      inv.command = "steady";
      RunConfig cfg = steadyFlags.load();
      if (!steadyFlags.network.empty()) cfg.network.file = absolute(steadyFlags.network);
      if (!steadyFlags.demand.empty()) cfg.demand.file = absolute(steadyFlags.demand);
      if (tol) cfg.steady.tol = *tol;
      if (maxIter) cfg.steady.maxIter = *maxIter;
      if (damping) cfg.steady.damping = *damping;
      return cmd_steady(std::move(cfg), inv);
    }
    if (beveridge->parsed()) {
      inv.command = "beveridge";
      return cmd_beveridge(bev, inv);
    }
    if (calibrate->parsed()) {
      inv.command = "calibrate";
      RunConfig cfg = calFlags.load();
      if (!calFlags.network.empty()) cfg.network.file = absolute(calFlags.network);
      if (!calFlags.demand.empty()) cfg.demand.file = absolute(calFlags.demand);
      if (calJobs) cfg.engine.jobs = *calJobs;
      if (calRes) cfg.calibrate.resolution = *calRes;
      return cmd_calibrate(std::move(cfg), reference, inv);
    }
    if (exportCmd->parsed()) {
      inv.command = "scenario export";
      RunConfig cfg = expFlags.load();
      if (!expFlags.network.empty()) cfg.network.file = absolute(expFlags.network);
      if (!expFlags.demand.empty()) cfg.demand.file = absolute(expFlags.demand);
      if (expSteps) cfg.scenario.steps = expSteps;
      return cmd_scenario_export(std::move(cfg), inv);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n'
              << "residual=" << e.residual() << " iterations=" << e.iterations() << '\n';
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kExitUsage : kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  }
  return kExitUsage;
}
