#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "labornet/abm.hpp"
#include "labornet/error.hpp"
#include "labornet/meanfield.hpp"
#include "support/synthetic.hpp"

using namespace labornet;

namespace {

ModelParams params_with(double du, double dv, double gu, double gv) {
  ModelParams p;
  p.deltaU = du;
  p.deltaV = dv;
  p.gammaU = gu;
  p.gammaV = gv;
  return p;
}

LaborState random_state(std::size_t n, std::size_t bins, Xoshiro256& rng) {
  LaborState s(n, bins);
  for (std::size_t i = 0; i < n; ++i) {
    s.employed[i] = static_cast<std::int64_t>(rng.uniform_index(200));
    s.vacancies[i] = static_cast<std::int64_t>(rng.uniform_index(20));
    for (std::size_t b = 0; b < bins; ++b) s.unemployed(i, b) = static_cast<std::int64_t>(rng.uniform_index(6));
  }
  return s;
}

}  // namespace

TEST_SUITE("abm") {

TEST_CASE("adjustment probabilities") {
  const ModelParams p = params_with(0.016, 0.012, 0.16, 0.16);
  auto a = adjustment_probabilities(100.0, 50.0, 50.0, p);
  CHECK(a.alphaU == 0.0);
  CHECK(a.alphaV == 0.0);
  a = adjustment_probabilities(100.0, 110.0, 100.0, p);
  CHECK(a.alphaU == doctest::Approx(0.016).epsilon(1e-14));
  CHECK(a.alphaV == 0.0);
  a = adjustment_probabilities(100.0, 90.0, 100.0, p);
  CHECK(a.alphaU == 0.0);
  CHECK(a.alphaV == doctest::Approx(0.016).epsilon(1e-14));
  const ModelParams fast = params_with(0.016, 0.012, 1.0, 1.0);
  CHECK(adjustment_probabilities(1.0, 6.0, 1.0, fast).alphaU == 1.0);
  CHECK(adjustment_probabilities(0.0, 6.0, 1.0, fast).alphaU == 0.0);
}

TEST_CASE("combined probabilities") {
  const ModelParams p = params_with(0.016, 0.012, 0.16, 0.16);
  CHECK(combined_probabilities(0.0, 0.0, p).separation == 0.016);
  CHECK(combined_probabilities(0.016, 0.0, p).separation == doctest::Approx(0.031744).epsilon(1e-14));
  CHECK(combined_probabilities(1.0, 1.0, p).separation == 1.0);
  CHECK(combined_probabilities(1.0, 1.0, p).opening == 1.0);
  CHECK(combined_probabilities(0.0, 0.5, p).opening == doctest::Approx(0.012 + 0.5 - 0.006));
}

TEST_CASE("rescue rule") {
  LaborState s(3, 2);
  s.employed = {0, 5, 0};
  const std::vector<double> target = {10.0, 10.0, 0.0};
  const auto opened = rescue_rule(s, target);
  CHECK(opened == std::vector<std::int64_t>{1, 0, 0});
  CHECK(s.vacancies == std::vector<std::int64_t>{1, 0, 0});
  CHECK(rescue_rule(s, target) == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("urn matching against the occupancy formula") {
  UrnMatcher matcher;
  Xoshiro256 rng(12);
  std::vector<std::uint32_t> winners;
  for (const auto& [s, v] : std::vector<std::pair<std::uint32_t, std::int64_t>>{{5, 5}, {30, 7}, {3, 40}, {100, 100}}) {
    std::vector<std::uint32_t> applicants(s);
    std::iota(applicants.begin(), applicants.end(), 0u);
    const int trials = 20000;
    double mean = 0.0, sq = 0.0;
    for (int k = 0; k < trials; ++k) {
      matcher.match(applicants, v, rng, winners);
      const auto m = static_cast<double>(winners.size());
      mean += m;
      sq += m * m;
    }
    mean /= trials;
    const double var = sq / trials - mean * mean;
    const double se = std::sqrt(var / trials);
    const auto vd = static_cast<double>(v);
    const double expected = vd * (1.0 - std::pow(1.0 - 1.0 / vd, static_cast<double>(s)));
    CHECK(std::abs(mean - expected) <= 3.0 * se);
  }
}

TEST_CASE("urn matching picks winners uniformly") {
  UrnMatcher matcher;
  Xoshiro256 rng(3);
  std::vector<std::uint32_t> winners;
  const std::vector<std::uint32_t> applicants = {0, 1, 2, 3};
  std::vector<int> wins(4, 0);
  const int trials = 40000;
  for (int k = 0; k < trials; ++k) {
    matcher.match(applicants, 1, rng, winners);
    REQUIRE(winners.size() == 1);
    ++wins[winners[0]];
  }
  double chi2 = 0.0;
  for (const int w : wins) chi2 += (w - trials / 4.0) * (w - trials / 4.0) / (trials / 4.0);
  CHECK(chi2 < 16.27);
  matcher.match(applicants, 0, rng, winners);
  CHECK(winners.empty());
}

TEST_CASE("no unemployment means no hires") {
  const Network net = complete_network(3);
  LaborState s(3, 4);
  s.employed = {100, 100, 100};
  s.vacancies = {2, 0, 1};
  const std::vector<double> target = {100.0, 100.0, 100.0};
  const auto out = stochastic_step(s, target, net, ModelParams::calibrated(300), 9, 0);
  CHECK(out.record.hires.empty());
  CHECK(out.record.applications.empty());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.state.vacancies[i] == s.vacancies[i] + out.record.openings[i]);
  }
}

TEST_CASE("step invariants on random states") {
  const Network net = testing::synthetic_network(12, 5, 0.4);
  Xoshiro256 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t bins = 1 + rng.uniform_index(6);
    LaborState s = random_state(12, bins, rng);
    std::vector<double> target(12);
    for (double& x : target) x = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01() * 300.0;
    ModelParams p = params_with(rng.uniform01() * 0.1, rng.uniform01() * 0.1, rng.uniform01(),
                                rng.uniform01());
    p.laborForce = static_cast<double>(s.workers());
    const auto before = s;
    const auto out = stochastic_step(s, target, net, p, rng(), trial);
    const auto& rec = out.record;
    CHECK(out.state.workers() == before.workers());
    CHECK_NOTHROW(out.state.validate(before.workers()));

    std::vector<std::int64_t> sentFrom(12, 0), hiredFrom(12, 0), hiredInto(12, 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> sent;
    for (const Flow& f : rec.applications) {
      sentFrom[f.from] += f.count;
      sent[{f.from, f.to}] = f.count;
    }
    for (const Flow& f : rec.hires) {
      hiredFrom[f.from] += f.count;
      hiredInto[f.to] += f.count;
      CHECK(f.count <= sent[{f.from, f.to}]);
    }
    for (std::size_t i = 0; i < 12; ++i) {
      const std::int64_t v0 = before.vacancies[i] + rec.rescued[i];
      CHECK(hiredInto[i] == rec.hiresInto[i]);
      CHECK(hiredFrom[i] == rec.hiresFrom[i]);
      CHECK(rec.hiresInto[i] <= v0);
      CHECK(sentFrom[i] <= before.unemployed_in(i));
      CHECK(out.state.vacancies[i] == v0 + rec.openings[i] - rec.hiresInto[i]);
      CHECK(out.state.employed[i] == before.employed[i] + rec.hiresInto[i] - rec.separations[i]);
      CHECK(out.state.unemployed_in(i) ==
            before.unemployed_in(i) - rec.hiresFrom[i] + rec.separations[i]);
      CHECK(rec.separations[i] <= before.employed[i]);
      CHECK(rec.openings[i] <= before.employed[i]);
      if (bins > 1) CHECK(out.state.unemployed(i, 0) == rec.separations[i]);
      // Spells advance one bin; only hires remove workers from a bin.
      for (std::size_t b = 1; b + 1 < bins; ++b) {
        CHECK(out.state.unemployed(i, b) <= before.unemployed(i, b - 1));
      }
    }
  }
}

TEST_CASE("frozen dynamics without events") {
  const Network net = testing::synthetic_network(8, 1, 0.5);
  Xoshiro256 rng(8);
  LaborState s = random_state(8, 3, rng);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t b = 0; b < 3; ++b) s.unemployed(i, b) = 0;
    s.employed[i] += 1;
  }
  ModelParams p = params_with(0.0, 0.0, 0.0, 0.0);
  p.laborForce = static_cast<double>(s.workers());
  const auto path = constant_path(std::vector<double>(8, 50.0), 50);
  const auto traj = run_simulation(s, path, net, p, 50, 4, {true, nullptr});
  for (const auto& row : traj.aggregate) {
    CHECK(row.employed == traj.aggregate.front().employed);
    CHECK(row.vacancies == traj.aggregate.front().vacancies);
    CHECK(row.unemployed == 0.0);
  }
}

TEST_CASE("runs are reproducible") {
  const Network net = testing::synthetic_network(10, 2, 0.55);
  Xoshiro256 rng(1);
  const LaborState s = random_state(10, 5, rng);
  ModelParams p = ModelParams::calibrated(static_cast<double>(s.workers()));
  const auto path = constant_path(std::vector<double>(10, 100.0), 40);
  const auto a = run_simulation(s, path, net, p, 40, 123, {true, nullptr});
  const auto b = run_simulation(s, path, net, p, 40, 123, {true, nullptr});
  const auto c = run_simulation(s, path, net, p, 40, 124, {true, nullptr});
  REQUIRE(a.aggregate.size() == 41);
  bool differs = false;
  for (std::size_t t = 0; t < a.aggregate.size(); ++t) {
    CHECK(a.aggregate[t].unemployed == b.aggregate[t].unemployed);
    CHECK(a.aggregate[t].vacancies == b.aggregate[t].vacancies);
    CHECK(a.occupations[t].employed == b.occupations[t].employed);
    differs = differs || a.aggregate[t].unemployed != c.aggregate[t].unemployed;
  }
  CHECK(differs);

  const auto zero = run_simulation(s, path, net, p, 0, 123);
  REQUIRE(zero.aggregate.size() == 1);
  CHECK(zero.aggregate[0].employed == static_cast<double>(std::accumulate(s.employed.begin(), s.employed.end(), std::int64_t{0})));

  try {
    run_simulation(s, path, net, p, 41, 123);
    FAIL("expected HorizonExceedsPath");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonExceedsPath);
  }
}

TEST_CASE("observer sees every step") {
  const Network net = complete_network(4);
  Xoshiro256 rng(5);
  const LaborState s = random_state(4, 2, rng);
  const ModelParams p = ModelParams::calibrated(static_cast<double>(s.workers()));
  std::vector<std::int64_t> seen;
  SimulationOptions opt;
  opt.observer = [&](const StepRecord& r) { seen.push_back(r.t); };
  run_simulation(s, constant_path(std::vector<double>(4, 50.0), 6), net, p, 6, 1, opt);
  CHECK(seen == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("time-averaged realized demand sits at its fixed point") {
  // With the target always above realized demand, the expected change of
  // d = e + v is delta_v e + (1 - delta_v) gamma_v (target - d) - delta_u e,
  // which vanishes exactly at d* = target - (delta_u - delta_v) e / (gamma_v (1 - delta_v)).
  const std::size_t n = 4;
  const Network net = complete_network(n);
  ModelParams p = ModelParams::calibrated(40000.0);
  const std::vector<double> target(n, 10000.0);
  const auto steady = solve_steady_state(net, target, p);
  LaborState s = round_to_labor_state(steady.state, 40000);
  StochasticEngine engine(net, p, 2718);
  const int burn = 500, batches = 40, batchLen = 500;
  std::vector<double> batchMeans;
  int positiveGap = 0;
  for (int t = 0; t < burn + batches * batchLen; ++t) {
    if (t >= burn && (t - burn) % batchLen == 0) batchMeans.push_back(0.0);
    if (t >= burn) {
      const auto e = static_cast<double>(s.employed[0]);
      const double d = e + static_cast<double>(s.vacancies[0]);
      positiveGap += d > target[0] ? 1 : 0;
      batchMeans.back() += (d - steady_realized_demand(target[0], e, p)) / batchLen;
    }
    engine.step(s, target, t);
  }
  CHECK(positiveGap == 0);
  const double mean = std::accumulate(batchMeans.begin(), batchMeans.end(), 0.0) / batches;
  double var = 0.0;
  for (const double b : batchMeans) var += (b - mean) * (b - mean);
  var /= batches - 1;
  const double se = std::sqrt(var / batches);
  CHECK(std::abs(mean) <= 3.0 * se);
  // And the realized demand falls short of the target.
  CHECK(steady_realized_demand(target[0], steady.state.employed[0], p) < target[0]);
}

}  // TEST_SUITE
