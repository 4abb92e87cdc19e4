#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "labornet/error.hpp"
#include "labornet/metrics.hpp"
#include "labornet/random.hpp"

using namespace labornet;

namespace {

// One occupation with the given (u, e) pairs; long-term unemployment is u / 2.
Trajectory single(std::vector<std::pair<double, double>> ue) {
  Trajectory tr;
  std::int64_t t = 0;
  for (const auto& [u, e] : ue) {
    tr.aggregate.push_back({t++, u, 0.0, e, u / 2.0});
    tr.occupations.push_back({{e}, {u}, {0.0}, {u / 2.0}});
  }
  return tr;
}

BeveridgeCurve curve(std::vector<CurvePoint> pts) { return BeveridgeCurve{std::move(pts)}; }

BeveridgeCurve square(double x0, double y0, double side) {
  return curve({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

double polygon_area(const std::vector<CurvePoint>& p) {
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& q = p[k];
    const auto& r = p[(k + 1) % p.size()];
    a += q.u * r.v - r.u * q.v;
  }
  return a / 2.0;
}

// Sutherland-Hodgman clipping of `subject` by the convex CCW polygon `clip`.
std::vector<CurvePoint> clip_convex(std::vector<CurvePoint> subject, const std::vector<CurvePoint>& clip) {
  for (std::size_t k = 0; k < clip.size() && !subject.empty(); ++k) {
    const CurvePoint a = clip[k], b = clip[(k + 1) % clip.size()];
    auto side = [&](const CurvePoint& p) { return (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u); };
    std::vector<CurvePoint> out;
    for (std::size_t m = 0; m < subject.size(); ++m) {
      const CurvePoint p = subject[m], q = subject[(m + 1) % subject.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back({p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

std::vector<CurvePoint> random_convex(Xoshiro256& rng, double cx, double cy, double radius) {
  std::vector<double> angles(3 + rng.uniform_index(8));
  for (double& a : angles) a = rng.uniform01() * 2.0 * std::numbers::pi;
  std::sort(angles.begin(), angles.end());
  std::vector<CurvePoint> pts;
  for (const double a : angles) pts.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
  return pts;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("rates") {
  Trajectory tr;
  tr.aggregate.push_back({0, 5.0, 0.0, 95.0, 1.0});
  tr.aggregate.push_back({1, 10.0, 10.0, 90.0, 4.0});
  const auto r = rates_from_series(tr);
  CHECK(r.aggregate[0].unemployment == 0.05);
  CHECK(r.aggregate[0].vacancy == 0.0);
  CHECK(r.aggregate[0].longTerm == 0.01);
  CHECK(r.aggregate[1].vacancy == 0.1);
  CHECK(r.t == std::vector<std::int64_t>{0, 1});
  CHECK_THROWS_AS(rates_from_series(Trajectory{}), Error);
  Trajectory empty;
  empty.aggregate.push_back({0, 0.0, 3.0, 0.0, 0.0});
  try {
    rates_from_series(empty);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("per-occupation rates use local denominators") {
  Trajectory tr;
  tr.aggregate.push_back({0, 10.0, 5.0, 90.0, 2.0});
  tr.occupations.push_back({{40.0, 50.0, 0.0}, {10.0, 0.0, 0.0}, {0.0, 5.0, 0.0}, {2.0, 0.0, 0.0}});
  const auto r = rates_from_series(tr);
  REQUIRE(r.occupations.size() == 1);
  CHECK(r.occupations[0][0].unemployment == 0.2);
  CHECK(r.occupations[0][1].vacancy == doctest::Approx(5.0 / 55.0));
  CHECK(r.occupations[0][2].unemployment == 0.0);
}

TEST_CASE("window averages") {
  const std::vector<std::size_t> both = {0, 1};
  SUBCASE("ratio of sums") {
    const auto w = window_average_rates(single({{0.0, 100.0}, {10.0, 90.0}}), both);
    CHECK(w.unemployment[0] == doctest::Approx(0.05));
    CHECK(w.longTerm[0] == doctest::Approx(0.025));
    const auto a = alternative_average_rates(single({{0.0, 100.0}, {10.0, 90.0}}), both);
    CHECK(a.unemployment[0] == doctest::Approx(0.05));
  }
  SUBCASE("the two averages differ when the workforce varies") {
    const auto tr = single({{10.0, 90.0}, {10.0, 40.0}});
    CHECK(window_average_rates(tr, both).unemployment[0] == doctest::Approx(20.0 / 150.0));
    CHECK(alternative_average_rates(tr, both).unemployment[0] == doctest::Approx(0.15));
  }
  SUBCASE("constant workforce makes them agree") {
    Xoshiro256 rng(6);
    std::vector<std::pair<double, double>> ue;
    for (int t = 0; t < 30; ++t) {
      const double u = rng.uniform01() * 100.0;
      ue.push_back({u, 100.0 - u});
    }
    const auto tr = single(ue);
    std::vector<std::size_t> window = {0, 3, 4, 9, 10, 29};
    CHECK(window_average_rates(tr, window).unemployment[0] ==
          doctest::Approx(alternative_average_rates(tr, window).unemployment[0]).epsilon(1e-12));
  }
  SUBCASE("errors") {
    const auto tr = single({{0.0, 0.0}, {1.0, 1.0}});
    const std::vector<std::size_t> none;
    const std::vector<std::size_t> first = {0};
    try {
      window_average_rates(tr, none);
      FAIL("expected EmptyWindow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyWindow);
    }
    CHECK_THROWS_AS(window_average_rates(tr, first), Error);
    try {
      alternative_average_rates(tr, both);
      FAIL("expected ZeroDenominator");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroDenominator);
    }
  }
}

TEST_CASE("beveridge curve extraction") {
  Trajectory tr;
  for (int t = 0; t < 5; ++t) tr.aggregate.push_back({t, 1.0 + t, 2.0, 9.0 - t, 0.0});
  const auto r = rates_from_series(tr);
  const auto c = beveridge_curve(r, 1, 4);
  REQUIRE(c.size() == 3);
  CHECK(c.points[0].u == 0.2);
  CHECK(c.points[0].v == doctest::Approx(2.0 / 10.0));
  CHECK(beveridge_curve(r).size() == 5);
}

TEST_CASE("signed area") {
  auto sq = curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(signed_area(sq) == 1.0);
  std::reverse(sq.points.begin(), sq.points.end());
  CHECK(signed_area(sq) == -1.0);
  CHECK(signed_area(curve({{0, 0}, {1, 1}, {2, 2}, {3, 3}})) == 0.0);
  CHECK(cycle_direction(1.0) == CycleDirection::CounterClockwise);
  CHECK(cycle_direction(-1.0) == CycleDirection::Clockwise);
  CHECK(cycle_direction(0.0) == CycleDirection::None);
  try {
    signed_area(curve({{0, 0}, {1, 1}}));
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewPoints);
  }
  Xoshiro256 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CurvePoint> pts(3 + rng.uniform_index(20));
    for (auto& p : pts) p = {rng.uniform01(), rng.uniform01()};
    auto c = curve(pts);
    const double a = signed_area(c);
    std::reverse(c.points.begin(), c.points.end());
    CHECK(signed_area(c) == doctest::Approx(-a).epsilon(1e-12));
  }
}

TEST_CASE("overlap examples") {
  const auto a = square(0, 0, 1);
  CHECK(curve_overlap(a, a) == 1.0);
  CHECK(curve_overlap(a, square(3, 3, 1)) == 0.0);
  const auto rep = curve_overlap_report(square(0.5, 0.5, 1), square(0, 0, 2));
  CHECK(std::abs(rep.iou - 0.25) <= std::max(rep.gridError, 1e-12));
  CHECK(rep.gridError < 0.01);
  CHECK(rep.unionCells == rep.referenceCells);
  CHECK(rep.intersectionCells == rep.modelCells);
  try {
    curve_overlap(curve({{0, 0}, {1, 1}, {2, 2}}), a);
    FAIL("expected DegenerateCurve");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCurve);
  }
}

TEST_CASE("overlap of a self-intersecting curve follows the even-odd rule") {
  // A bow tie made of two triangles of area 1/4 each.
  const auto bow = curve({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  const auto rep = curve_overlap_report(bow, square(0, 0, 1), 1024);
  CHECK(std::abs(rep.iou - 0.5) <= rep.gridError);
}

TEST_CASE("overlap against exact convex clipping") {
  Xoshiro256 rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_convex(rng, 0.0, 0.0, 1.0);
    const auto q = random_convex(rng, rng.uniform01() - 0.5, rng.uniform01() - 0.5, 0.5 + rng.uniform01());
    const double ap = polygon_area(p), aq = polygon_area(q);
    if (ap < 0.05 || aq < 0.05) continue;
    const double inter = std::abs(polygon_area(clip_convex(p, q)));
    const double exact = inter / (ap + aq - inter);
    const auto rep = curve_overlap_report(curve(p), curve(q), 1024);
    CHECK(std::abs(rep.iou - exact) <= rep.gridError);
  }
}

TEST_CASE("overlap is symmetric and affine invariant") {
  Xoshiro256 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CurvePoint> p(4 + rng.uniform_index(10)), q(4 + rng.uniform_index(10));
    for (auto& x : p) x = {rng.uniform01(), rng.uniform01()};
    for (auto& x : q) x = {rng.uniform01() * 0.8 + 0.1, rng.uniform01() * 0.8 + 0.1};
    BeveridgeCurve a = curve(p), b = curve(q);
    double iab = 0.0;
    try {
      iab = curve_overlap(a, b, 512);
    } catch (const Error&) {
      continue;
    }
    CHECK(curve_overlap(b, a, 512) == iab);
    const double su = 0.03 + rng.uniform01(), sv = 0.5 + rng.uniform01() * 4.0;
    const double ou = rng.uniform01() * 10.0, ov = -rng.uniform01();
    auto map = [&](BeveridgeCurve c) {
      for (auto& x : c.points) x = {ou + su * x.u, ov + sv * x.v};
      return c;
    };
    const auto rep = curve_overlap_report(map(a), map(b), 512);
    CHECK(std::abs(rep.iou - iab) <= rep.gridError);
  }
}

}  // TEST_SUITE
