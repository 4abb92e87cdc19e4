#include "labornet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "labornet/error.hpp"

namespace labornet {

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

void check_window(const Trajectory& series, std::span<const std::size_t> window) {
  if (window.empty()) throw Error(ErrorKind::EmptyWindow, "averaging window is empty");
  if (!series.has_occupations()) {
    throw Error(ErrorKind::InvalidArgument, "window averages need per-occupation series");
  }
  for (const std::size_t t : window) {
    if (t >= series.occupations.size()) {
      throw Error(ErrorKind::InvalidArgument,
                  "window step " + std::to_string(t) + " is past the end of the series");
    }
  }
}

}  // namespace

RateSeries rates_from_series(const Trajectory& series) {
  if (series.aggregate.empty()) throw Error(ErrorKind::EmptySeries, "series has no steps");
  RateSeries out;
  out.t.reserve(series.aggregate.size());
  out.aggregate.reserve(series.aggregate.size());
  for (const auto& p : series.aggregate) {
    const double workers = p.unemployed + p.employed;
    if (!(workers > 0.0)) {
      throw Error(ErrorKind::ZeroDenominator,
                  "no workers at step " + std::to_string(p.t));
    }
    out.t.push_back(p.t);
    out.aggregate.push_back({p.unemployed / workers, ratio_or_zero(p.vacancies, p.vacancies + p.employed),
                             p.longTermUnemployed / workers});
  }
  // Occupations with no workers at a step get zero rates.
  for (const auto& occ : series.occupations) {
    std::vector<RatePoint> row(occ.employed.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double workers = occ.unemployed[i] + occ.employed[i];
      row[i] = {ratio_or_zero(occ.unemployed[i], workers),
                ratio_or_zero(occ.vacancies[i], occ.vacancies[i] + occ.employed[i]),
                ratio_or_zero(occ.longTermUnemployed[i], workers)};
    }
    out.occupations.push_back(std::move(row));
  }
  return out;
}

WindowAverage window_average_rates(const Trajectory& series, std::span<const std::size_t> window) {
  check_window(series, window);
  const std::size_t n = series.occupation_count();
  std::vector<double> u(n, 0.0), lt(n, 0.0), workers(n, 0.0);
  for (const std::size_t t : window) {
    const auto& occ = series.occupations[t];
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += occ.unemployed[i];
      lt[i] += occ.longTermUnemployed[i];
      workers[i] += occ.unemployed[i] + occ.employed[i];
    }
  }
  WindowAverage out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(workers[i] > 0.0)) {
      throw Error(ErrorKind::ZeroDenominator,
                  "occupation " + std::to_string(i) + " has no workers in the window");
    }
    out.unemployment[i] = u[i] / workers[i];
    out.longTerm[i] = lt[i] / workers[i];
  }
  return out;
}

WindowAverage alternative_average_rates(const Trajectory& series,
                                        std::span<const std::size_t> window) {
  check_window(series, window);
  const std::size_t n = series.occupation_count();
  WindowAverage out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const std::size_t t : window) {
    const auto& occ = series.occupations[t];
    for (std::size_t i = 0; i < n; ++i) {
      const double workers = occ.unemployed[i] + occ.employed[i];
      if (!(workers > 0.0)) {
        throw Error(ErrorKind::ZeroDenominator,
                    "occupation " + std::to_string(i) + " has no workers at step " +
                        std::to_string(t));
      }
      out.unemployment[i] += occ.unemployed[i] / workers;
      out.longTerm[i] += occ.longTermUnemployed[i] / workers;
    }
  }
  const auto count = static_cast<double>(window.size());
  for (std::size_t i = 0; i < n; ++i) {
    out.unemployment[i] /= count;
    out.longTerm[i] /= count;
  }
  return out;
}

BeveridgeCurve beveridge_curve(const RateSeries& rates, std::size_t first, std::size_t last) {
  last = std::min(last, rates.aggregate.size());
  BeveridgeCurve c;
  for (std::size_t t = first; t < last; ++t) {
    c.points.push_back({rates.aggregate[t].unemployment, rates.aggregate[t].vacancy});
  }
  return c;
}

double signed_area(const BeveridgeCurve& curve) {
  const auto& p = curve.points;
  if (p.size() < 3) throw Error(ErrorKind::TooFewPoints, "a closed curve needs at least 3 points");
  // Shift to the first point to keep the cross products small.
  const double u0 = p[0].u;
  const double v0 = p[0].v;
  double twice = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& a = p[k];
    const auto& b = p[(k + 1) % p.size()];
    twice += (a.u - u0) * (b.v - v0) - (b.u - u0) * (a.v - v0);
  }
  return 0.5 * twice;
}

CycleDirection cycle_direction(double area) noexcept {
  if (area > 0.0) return CycleDirection::CounterClockwise;
  if (area < 0.0) return CycleDirection::Clockwise;
  return CycleDirection::None;
}

const char* to_string(CycleDirection d) noexcept {
  switch (d) {
    case CycleDirection::CounterClockwise: return "counter-clockwise";
    case CycleDirection::Clockwise: return "clockwise";
    case CycleDirection::None: return "none";
  }
  return "none";
}

namespace {

struct Grid {
  double x0, y0, w, h;
  std::size_t res;
};

// Column spans [begin, end) of cells whose centers lie inside the polygon on row r.
void row_spans(const std::vector<CurvePoint>& poly, const Grid& g, std::size_t r,
               std::vector<double>& xs, std::vector<std::pair<std::int64_t, std::int64_t>>& spans) {
  spans.clear();
  xs.clear();
  const double y = g.y0 + (static_cast<double>(r) + 0.5) * g.h;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto& a = poly[k];
    const auto& b = poly[(k + 1) % poly.size()];
    if ((a.v <= y) != (b.v <= y)) {
      xs.push_back(a.u + (y - a.v) / (b.v - a.v) * (b.u - a.u));
    }
  }
  std::sort(xs.begin(), xs.end());
  const auto res = static_cast<std::int64_t>(g.res);
  auto column = [&](double x) {
    // First column whose center is at or right of x.
    const double c = std::ceil((x - g.x0) / g.w - 0.5);
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(c), 0, res);
  };
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
    const std::int64_t lo = column(xs[k]);
    const std::int64_t hi = column(xs[k + 1]);
    if (hi > lo) spans.emplace_back(lo, hi);
  }
}

double perimeter_cells(const std::vector<CurvePoint>& poly, const Grid& g) {
  double total = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto& a = poly[k];
    const auto& b = poly[(k + 1) % poly.size()];
    total += std::abs(b.u - a.u) / g.w + std::abs(b.v - a.v) / g.h;
  }
  return total;
}

}  // namespace

OverlapReport curve_overlap_report(const BeveridgeCurve& model, const BeveridgeCurve& reference,
                                   std::size_t resolution) {
  if (model.size() < 3 || reference.size() < 3) {
    throw Error(ErrorKind::TooFewPoints, "a closed curve needs at least 3 points");
  }
  if (resolution < 1) throw Error(ErrorKind::InvalidArgument, "grid resolution must be positive");
  double xmin = model.points[0].u, xmax = xmin, ymin = model.points[0].v, ymax = ymin;
  for (const auto* c : {&model, &reference}) {
    for (const auto& p : c->points) {
      if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
        throw Error(ErrorKind::InvalidArgument, "curve point is not finite");
      }
      xmin = std::min(xmin, p.u);
      xmax = std::max(xmax, p.u);
      ymin = std::min(ymin, p.v);
      ymax = std::max(ymax, p.v);
    }
  }
  if (!(xmax > xmin) || !(ymax > ymin)) {
    throw Error(ErrorKind::DegenerateCurve, "curves span no area");
  }
  const auto fres = static_cast<double>(resolution);
  const Grid g{xmin, ymin, (xmax - xmin) / fres, (ymax - ymin) / fres, resolution};

  OverlapReport rep;
  std::vector<double> xs;
  std::vector<std::pair<std::int64_t, std::int64_t>> a, b;
  for (std::size_t r = 0; r < resolution; ++r) {
    row_spans(model.points, g, r, xs, a);
    row_spans(reference.points, g, r, xs, b);
    for (const auto& s : a) rep.modelCells += s.second - s.first;
    for (const auto& s : b) rep.referenceCells += s.second - s.first;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const std::int64_t lo = std::max(a[i].first, b[j].first);
      const std::int64_t hi = std::min(a[i].second, b[j].second);
      if (hi > lo) rep.intersectionCells += hi - lo;
      if (a[i].second < b[j].second) ++i; else ++j;
    }
  }
  if (rep.modelCells == 0 || rep.referenceCells == 0) {
    throw Error(ErrorKind::DegenerateCurve,
                rep.modelCells == 0 ? "model curve encloses no area"
                                    : "reference curve encloses no area");
  }
  rep.unionCells = rep.modelCells + rep.referenceCells - rep.intersectionCells;
  rep.iou = static_cast<double>(rep.intersectionCells) / static_cast<double>(rep.unionCells);
  rep.gridError = (perimeter_cells(model.points, g) + perimeter_cells(reference.points, g)) /
                  static_cast<double>(rep.unionCells);
  return rep;
}

double curve_overlap(const BeveridgeCurve& model, const BeveridgeCurve& reference,
                     std::size_t resolution) {
  return curve_overlap_report(model, reference, resolution).iou;
}

}  // namespace labornet
