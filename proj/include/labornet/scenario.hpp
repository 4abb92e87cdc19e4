#pragma once

// Target labor demand scenarios.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "labornet/error.hpp"
#include "labornet/network.hpp"

namespace labornet {

/// Sigmoid automation shock timing.
struct ShockSpec {
  std::int64_t startStep = 0;    ///< t_s: target starts moving here
  double midpointStep = 0.0;     ///< t_0: halfway between d0 and dPost
  double steepnessPerYear = 0.79;
  double stepsPerYear = 52.0 / 6.75;
  double aggregateScale = 1.0;   ///< post-shock total demand multiplier

  /// Shock whose midpoint lies `midpointYears` after `startStep`.
  static ShockSpec from_years(std::int64_t startStep, double midpointYears,
                              double steepnessPerYear, double stepsPerYear);

  double steepness_per_step() const noexcept { return steepnessPerYear / stepsPerYear; }
  void validate() const;
};

/// Time-indexed target demand d(i, t). Evaluated on demand, never tabulated;
/// defined for 0 <= t < horizon().
class DemandPath {
 public:
  struct Constant {
    std::vector<double> base;
  };
  struct Sigmoid {
    std::vector<double> base;
    std::vector<double> post;  ///< already multiplied by spec.aggregateScale
    ShockSpec spec;
  };
  struct Sine {
    std::vector<double> base;
    double amplitude = 0.0;
    double periodSteps = 1.0;
    double phaseSteps = 0.0;
    double scale = 1.0;
  };
  using Shape = std::variant<Constant, Sigmoid, Sine>;

  DemandPath(Shape shape, std::int64_t horizon);

  std::size_t size() const noexcept;
  std::int64_t horizon() const noexcept { return horizon_; }
  const Shape& shape() const noexcept { return shape_; }
  std::string description() const;

  /// Fill `out` (size n) with d(., t). Throws HorizonExceedsPath past the end.
  void evaluate(std::int64_t t, std::span<double> out) const;
  std::vector<double> at(std::int64_t t) const;
  double at(std::size_t i, std::int64_t t) const;

  DemandPath with_horizon(std::int64_t horizon) const;

 private:
  Shape shape_;
  std::int64_t horizon_;
};

DemandPath constant_path(std::vector<double> d0, std::int64_t horizon);

/// Post-shock reallocated demand: hours shrink by the automation level and
/// are split evenly over the labor force, d_i = e0_i (1 - p_i) L / sum_j e0_j (1 - p_j).
std::vector<double> post_shock_demand(std::span<const double> e0, const ScoreVector& p,
                                      double laborForce);

/// d(t) = d0 for t < t_s; dPost + (d0 - dPost) / (1 + exp(k'(t - t_0))) after,
/// with k' the per-step steepness.
DemandPath sigmoid_path(std::vector<double> d0, std::vector<double> dPost,
                        const ShockSpec& spec, std::int64_t horizon);

/// Pro-rata business cycle d(t) = d0 (1 + a sin(2 pi (t + phase) / period)).
DemandPath sine_path(std::vector<double> d0, double amplitude, double periodYears,
                     double stepsPerYear, std::int64_t horizon, double phaseYears = 0.0);

/// Uniform random permutation of the scores (Fisher-Yates on a portable stream).
ScoreVector shuffle_scores(const ScoreVector& p, std::uint64_t seed);

/// Ascending scores assigned to occupations in ascending code order.
template <std::totally_ordered Key>
ScoreVector assortative_scores(const ScoreVector& p, std::span<const Key> codes) {
  if (codes.size() != p.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one code per occupation is required");
  }
  std::vector<std::size_t> order(codes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(codes[order[k - 1]] < codes[order[k]])) {
      throw Error(ErrorKind::DuplicateCode, "occupation codes must be unique");
    }
  }
  std::vector<double> sorted = p.values;
  std::sort(sorted.begin(), sorted.end());
  ScoreVector out;
  out.values.resize(p.size());
  for (std::size_t k = 0; k < order.size(); ++k) out.values[order[k]] = sorted[k];
  return out;
}

/// Scale post-shock demand by `factor`. For a sigmoid shock this rescales the
/// post-shock target (the pre-shock segment is untouched); paths without a
/// shock segment are scaled at every step.
DemandPath scale_aggregate(const DemandPath& path, double factor);

}  // namespace labornet
