#pragma once

// Run configuration: YAML file, then command-line overrides, then defaults.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "labornet/calibrate.hpp"
#include "labornet/meanfield.hpp"
#include "labornet/params.hpp"

namespace labornet::cli {

/// Bad configuration or usage; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NetworkConfig {
  std::string file;         ///< network file written by build-net
  std::size_t complete = 0; ///< complete network on this many occupations
  std::string transitions;  ///< transition counts, with self_loop
  std::optional<double> selfLoop;
};

struct DemandConfig {
  std::string file;
  std::optional<double> uniform;
  std::optional<double> laborForce;  ///< rescale the demand total to this
};

struct ShockConfig {
  std::string scores;
  std::string crosswalk;
  std::int64_t startStep = 0;
  double midpointYears = 15.0;
  double steepnessPerYear = 0.79;
  double aggregateScale = 1.0;
  std::string surrogate = "none";
  std::uint64_t surrogateSeed = 0;
};

struct CycleConfig {
  double amplitude = 0.065;
  double periodYears = 14.6;
  double phaseYears = 0.0;
};

struct ScenarioConfig {
  std::string type = "constant";
  std::optional<std::int64_t> steps;
  ShockConfig shock;
  CycleConfig cycle;
};

struct EngineConfig {
  std::string type = "meanfield";
  std::optional<std::uint64_t> seed;
  std::size_t ensemble = 1;
  std::size_t jobs = 1;
};

struct OutputConfig {
  std::string path;
  bool perOccupation = false;
  std::string trace;
};

struct CalibrateConfig {
  GridAxis amplitude{0.065, 0.065, 1};
  GridAxis deltaU{0.016, 0.016, 1};
  GridAxis deltaV{0.012, 0.012, 1};
  GridAxis dtWeeks{6.75, 6.75, 1};
  CycleSpec cycle;
  std::size_t resolution = kDefaultGridResolution;
};

struct RunConfig {
  std::string source;   ///< config file, empty when none
  std::string baseDir;  ///< relative paths in the file resolve against this
  NetworkConfig network;
  DemandConfig demand;
  ModelParams params;
  bool tauGiven = false;
  std::size_t spellBins = 0;  ///< 0: ten times tau
  ScenarioConfig scenario;
  EngineConfig engine;
  SteadyStateOptions steady;
  OutputConfig output;
  CalibrateConfig calibrate;

  /// Path as given on the command line or resolved against baseDir.
  std::string resolve(const std::string& path) const;
};

/// Reads a YAML config. Unknown keys are errors, so typos do not pass silently.
RunConfig load_config(const std::string& path);

/// Cross-field checks after overrides; fills derived values (tau from dt).
void finalize(RunConfig& cfg);

}  // namespace labornet::cli
