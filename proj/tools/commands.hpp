#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace labornet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModel = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

std::string version_string();

/// Command line as typed, echoed into output headers.
struct Invocation {
  std::string command;
  std::string argv;
};

struct BuildNetOptions {
  std::string transitions;
  std::optional<double> selfLoop;
  std::optional<double> stayFraction;
  std::optional<double> unemploymentRate;
  double dtWeeks = 6.75;
  std::string out;
};

struct BeveridgeOptions {
  std::string series;
  std::string reference;
  std::size_t resolution = 0;  ///< 0: default
  std::string out;             ///< optional curve CSV
};

int cmd_build_net(const BuildNetOptions& opt, const Invocation& inv);
int cmd_run(RunConfig cfg, const Invocation& inv);
int cmd_steady(RunConfig cfg, const Invocation& inv);
int cmd_beveridge(const BeveridgeOptions& opt, const Invocation& inv);
int cmd_calibrate(RunConfig cfg, const std::string& reference, const Invocation& inv);
int cmd_scenario_export(RunConfig cfg, const Invocation& inv);

}  // namespace labornet::cli
