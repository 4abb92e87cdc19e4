#include "config.hpp"

#include <filesystem>
#include <set>

#include <yaml-cpp/yaml.h>

#include "labornet/error.hpp"

namespace labornet::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("config: '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw ConfigError("config: unknown key '" + section + "." + key + "'");
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, const std::string& section, T& out) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, const std::string& section,
          std::optional<T>& out) {
  if (!node[key]) return;
  T value{};
  read(node, key, section, value);
  out = value;
}

void read_axis(const YAML::Node& node, const char* key, GridAxis& axis) {
  if (!node[key]) return;
  const std::string section = std::string("calibrate.") + key;
  const auto& n = node[key];
  if (n.IsScalar()) {
    double x = 0.0;
    read(node, key, "calibrate", x);
    axis = {x, x, 1};
    return;
  }
  check_keys(n, section, {"min", "max", "count"});
  read(n, "min", section, axis.min);
  axis.max = axis.min;
  read(n, "max", section, axis.max);
  long long count = 1;
  read(n, "count", section, count);
  if (count < 1) throw ConfigError("config: '" + section + ".count' must be at least 1");
  axis.count = static_cast<std::size_t>(count);
}

}  // namespace

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty() || baseDir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(baseDir) / p).lexically_normal().string();
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  cfg.source = path;
  cfg.baseDir = std::filesystem::path(path).parent_path().string();
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("config: cannot open " + path);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  if (root.IsNull()) return cfg;
  check_keys(root, "config",
             {"network", "demand", "params", "scenario", "engine", "steady", "output",
              "calibrate"});

  if (const auto n = root["network"]) {
    check_keys(n, "network", {"file", "complete", "transitions", "self_loop"});
    read(n, "file", "network", cfg.network.file);
    long long complete = 0;
    read(n, "complete", "network", complete);
    if (complete < 0) throw ConfigError("config: 'network.complete' must be positive");
    cfg.network.complete = static_cast<std::size_t>(complete);
    read(n, "transitions", "network", cfg.network.transitions);
    read(n, "self_loop", "network", cfg.network.selfLoop);
  }
  if (const auto n = root["demand"]) {
    check_keys(n, "demand", {"file", "uniform", "labor_force"});
    read(n, "file", "demand", cfg.demand.file);
    read(n, "uniform", "demand", cfg.demand.uniform);
    read(n, "labor_force", "demand", cfg.demand.laborForce);
  }
  if (const auto n = root["params"]) {
    check_keys(n, "params",
               {"delta_u", "delta_v", "gamma_u", "gamma_v", "dt_weeks", "tau_steps",
                "spell_bins"});
    auto& p = cfg.params;
    read(n, "delta_u", "params", p.deltaU);
    read(n, "delta_v", "params", p.deltaV);
    read(n, "gamma_u", "params", p.gammaU);
    read(n, "gamma_v", "params", p.gammaV);
    read(n, "dt_weeks", "params", p.dtWeeks);
    if (n["tau_steps"]) {
      read(n, "tau_steps", "params", p.tauSteps);
      cfg.tauGiven = true;
    }
    long long bins = 0;
    read(n, "spell_bins", "params", bins);
    if (bins < 0) throw ConfigError("config: 'params.spell_bins' must be positive");
    cfg.spellBins = static_cast<std::size_t>(bins);
  }
  if (const auto n = root["scenario"]) {
    check_keys(n, "scenario", {"type", "steps", "shock", "cycle"});
    read(n, "type", "scenario", cfg.scenario.type);
    read(n, "steps", "scenario", cfg.scenario.steps);
    if (const auto s = n["shock"]) {
      check_keys(s, "scenario.shock",
                 {"scores", "crosswalk", "start_step", "midpoint_years", "steepness_per_year",
                  "aggregate_scale", "surrogate", "surrogate_seed"});
      auto& k = cfg.scenario.shock;
      const std::string sec = "scenario.shock";
      read(s, "scores", sec, k.scores);
      read(s, "crosswalk", sec, k.crosswalk);
      read(s, "start_step", sec, k.startStep);
      read(s, "midpoint_years", sec, k.midpointYears);
      read(s, "steepness_per_year", sec, k.steepnessPerYear);
      read(s, "aggregate_scale", sec, k.aggregateScale);
      read(s, "surrogate", sec, k.surrogate);
      read(s, "surrogate_seed", sec, k.surrogateSeed);
    }
    if (const auto c = n["cycle"]) {
      check_keys(c, "scenario.cycle", {"amplitude", "period_years", "phase_years"});
      const std::string sec = "scenario.cycle";
      read(c, "amplitude", sec, cfg.scenario.cycle.amplitude);
      read(c, "period_years", sec, cfg.scenario.cycle.periodYears);
      read(c, "phase_years", sec, cfg.scenario.cycle.phaseYears);
    }
  }
  if (const auto n = root["engine"]) {
    check_keys(n, "engine", {"type", "seed", "ensemble", "jobs"});
    read(n, "type", "engine", cfg.engine.type);
    read(n, "seed", "engine", cfg.engine.seed);
    long long ensemble = 1, jobs = 1;
    read(n, "ensemble", "engine", ensemble);
    read(n, "jobs", "engine", jobs);
    if (ensemble < 1) throw ConfigError("config: 'engine.ensemble' must be at least 1");
    if (jobs < 1) throw ConfigError("config: 'engine.jobs' must be at least 1");
    cfg.engine.ensemble = static_cast<std::size_t>(ensemble);
    cfg.engine.jobs = static_cast<std::size_t>(jobs);
  }
  if (const auto n = root["steady"]) {
    check_keys(n, "steady", {"tol", "max_iter", "damping"});
    read(n, "tol", "steady", cfg.steady.tol);
    read(n, "max_iter", "steady", cfg.steady.maxIter);
    read(n, "damping", "steady", cfg.steady.damping);
  }
  if (const auto n = root["output"]) {
    check_keys(n, "output", {"path", "per_occupation", "trace"});
    read(n, "path", "output", cfg.output.path);
    read(n, "per_occupation", "output", cfg.output.perOccupation);
    read(n, "trace", "output", cfg.output.trace);
  }
  if (const auto n = root["calibrate"]) {
    check_keys(n, "calibrate",
               {"amplitude", "delta_u", "delta_v", "dt_weeks", "period_years", "warmup_cycles",
                "phase_years", "resolution"});
    auto& c = cfg.calibrate;
    read_axis(n, "amplitude", c.amplitude);
    read_axis(n, "delta_u", c.deltaU);
    read_axis(n, "delta_v", c.deltaV);
    read_axis(n, "dt_weeks", c.dtWeeks);
    read(n, "period_years", "calibrate", c.cycle.periodYears);
    read(n, "warmup_cycles", "calibrate", c.cycle.warmupCycles);
    read(n, "phase_years", "calibrate", c.cycle.phaseYears);
    long long res = static_cast<long long>(c.resolution);
    read(n, "resolution", "calibrate", res);
    if (res < 1) throw ConfigError("config: 'calibrate.resolution' must be positive");
    c.resolution = static_cast<std::size_t>(res);
  }
  return cfg;
}

void finalize(RunConfig& cfg) {
  auto& p = cfg.params;
  if (!cfg.tauGiven && p.dtWeeks > 0.0) p.tauSteps = long_term_threshold_steps(p.dtWeeks);
  const double savedL = p.laborForce;
  p.laborForce = 1.0;  // the real total is known only once demand is loaded
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: params: ") + e.what());
  }
  p.laborForce = savedL;

  const int sources = !cfg.network.file.empty() + (cfg.network.complete > 0) +
                      !cfg.network.transitions.empty();
  if (sources != 1) {
    throw ConfigError(
        "config: give exactly one of 'network.file', 'network.complete', 'network.transitions'");
  }
  if (!cfg.network.transitions.empty() && !cfg.network.selfLoop) {
    throw ConfigError("config: 'network.self_loop' is required with 'network.transitions'");
  }
  if (cfg.network.selfLoop && !(*cfg.network.selfLoop >= 0.0 && *cfg.network.selfLoop <= 1.0)) {
    throw ConfigError("config: 'network.self_loop' must lie in [0, 1]");
  }
  if (cfg.demand.file.empty() == !cfg.demand.uniform) {
    throw ConfigError("config: give exactly one of 'demand.file', 'demand.uniform'");
  }
  if (cfg.demand.uniform && !(*cfg.demand.uniform >= 0.0)) {
    throw ConfigError("config: 'demand.uniform' must be non-negative");
  }
  if (cfg.demand.laborForce && !(*cfg.demand.laborForce >= 1.0)) {
    throw ConfigError("config: 'demand.labor_force' must be at least 1");
  }

  const auto& type = cfg.scenario.type;
  if (type != "constant" && type != "sigmoid" && type != "sine") {
    throw ConfigError("config: 'scenario.type' must be constant, sigmoid or sine");
  }
  if (cfg.scenario.steps && *cfg.scenario.steps < 0) {
    throw ConfigError("config: 'scenario.steps' must be non-negative");
  }
  if (type == "sigmoid") {
    const auto& s = cfg.scenario.shock;
    if (s.scores.empty()) {
      throw ConfigError("config: 'scenario.shock.scores' is required for a sigmoid scenario");
    }
    if (s.surrogate != "none" && s.surrogate != "shuffle" && s.surrogate != "assortative") {
      throw ConfigError("config: 'scenario.shock.surrogate' must be none, shuffle or assortative");
    }
  }
  const auto& e = cfg.engine;
  if (e.type != "meanfield" && e.type != "abm") {
    throw ConfigError("config: 'engine.type' must be meanfield or abm");
  }
  if (e.type == "abm" && !e.seed) {
    throw ConfigError("config: 'engine.seed' (or --seed) is required for the abm engine");
  }
  if (e.ensemble > 1 && e.type != "abm") {
    throw ConfigError("config: an ensemble needs the abm engine");
  }
  if (e.ensemble > 1 && cfg.output.path.empty()) {
    throw ConfigError("config: an ensemble needs 'output.path' (or --out)");
  }
  if (!(cfg.steady.tol > 0.0)) throw ConfigError("config: 'steady.tol' must be positive");
  if (cfg.steady.maxIter < 1) throw ConfigError("config: 'steady.max_iter' must be positive");
  if (!(cfg.steady.damping > 0.0 && cfg.steady.damping <= 1.0)) {
    throw ConfigError("config: 'steady.damping' must lie in (0, 1]");
  }
}

}  // namespace labornet::cli
