#pragma once

// Rates, shock-window averages and Beveridge curve geometry.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "labornet/trajectory.hpp"

namespace labornet {

struct RatePoint {
  double unemployment = 0.0;  ///< U / (U + E)
  double vacancy = 0.0;       ///< V / (V + E)
  double longTerm = 0.0;      ///< U_lt / (U + E)
};

struct RateSeries {
  std::vector<std::int64_t> t;
  std::vector<RatePoint> aggregate;
  std::vector<std::vector<RatePoint>> occupations;  ///< [step][occupation], if available
};

/// Throws EmptySeries for an empty trajectory and ZeroDenominator when U + E is zero.
/// A zero V + E gives a vacancy rate of 0.
RateSeries rates_from_series(const Trajectory& series);

struct WindowAverage {
  std::vector<double> unemployment;
  std::vector<double> longTerm;
};

/// Ratio of sums per occupation: sum_t u_it / sum_t (u_it + e_it), likewise for
/// long-term unemployment. `window` holds trajectory row indices.
/// Throws EmptyWindow, and ZeroDenominator when an occupation has no workers in the window.
WindowAverage window_average_rates(const Trajectory& series, std::span<const std::size_t> window);

/// Mean over the window of u_it / (u_it + e_it). Throws ZeroDenominator naming the step.
WindowAverage alternative_average_rates(const Trajectory& series,
                                        std::span<const std::size_t> window);

struct CurvePoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct BeveridgeCurve {
  std::vector<CurvePoint> points;

  std::size_t size() const noexcept { return points.size(); }
};

/// Aggregate (u-rate, v-rate) points for rows [first, last).
BeveridgeCurve beveridge_curve(const RateSeries& rates, std::size_t first = 0,
                               std::size_t last = static_cast<std::size_t>(-1));

/// Shoelace area of the polygon closed from the last point back to the first.
/// Positive for counter-clockwise traversal. Throws TooFewPoints below 3 points.
double signed_area(const BeveridgeCurve& curve);

enum class CycleDirection { CounterClockwise, Clockwise, None };
CycleDirection cycle_direction(double signedArea) noexcept;
const char* to_string(CycleDirection d) noexcept;

inline constexpr std::size_t kDefaultGridResolution = 2048;

struct OverlapReport {
  double iou = 0.0;
  std::int64_t intersectionCells = 0;
  std::int64_t unionCells = 0;
  std::int64_t modelCells = 0;
  std::int64_t referenceCells = 0;
  /// Relative error bound from boundary cells: every cell a polygon edge crosses
  /// may be misclassified, so the cell counts are uncertain by about the
  /// combined edge length in cell units.
  double gridError = 0.0;
};

/// Intersection over union of the even-odd interiors of two closed polygons,
/// rasterized at cell centers on a resolution x resolution grid spanning the
/// joint bounding box. Throws DegenerateCurve when either interior covers no
/// cell, TooFewPoints below 3 points.
OverlapReport curve_overlap_report(const BeveridgeCurve& model, const BeveridgeCurve& reference,
                                   std::size_t resolution = kDefaultGridResolution);

double curve_overlap(const BeveridgeCurve& model, const BeveridgeCurve& reference,
                     std::size_t resolution = kDefaultGridResolution);

}  // namespace labornet
