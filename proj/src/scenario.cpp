#include "labornet/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "labornet/random.hpp"

namespace labornet {

ShockSpec ShockSpec::from_years(std::int64_t startStep, double midpointYears,
                                double steepnessPerYear, double stepsPerYear) {
  ShockSpec s;
  s.startStep = startStep;
  s.midpointStep = static_cast<double>(startStep) + midpointYears * stepsPerYear;
  s.steepnessPerYear = steepnessPerYear;
  s.stepsPerYear = stepsPerYear;
  return s;
}

void ShockSpec::validate() const {
  if (!(steepnessPerYear > 0.0)) {
    throw Error(ErrorKind::NonPositiveSteepness, "sigmoid steepness must be positive");
  }
  if (!(stepsPerYear > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "steps per year must be positive");
  }
  if (!(midpointStep > static_cast<double>(startStep))) {
    throw Error(ErrorKind::InvalidArgument, "shock midpoint must come after its start");
  }
  if (!(aggregateScale > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "aggregate scale must be positive");
  }
  if (startStep < 0) {
    throw Error(ErrorKind::InvalidArgument, "shock start must be non-negative");
  }
}

namespace {

const std::vector<double>& base_of(const DemandPath::Shape& shape) {
  return std::visit([](const auto& s) -> const std::vector<double>& { return s.base; }, shape);
}

void require_non_negative(std::span<const double> d, const char* what) {
  for (const double x : d) {
    if (!(x >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be non-negative");
    }
  }
}

}  // namespace

DemandPath::DemandPath(Shape shape, std::int64_t horizon)
    : shape_(std::move(shape)), horizon_(horizon) {
  if (horizon_ < 0) throw Error(ErrorKind::InvalidArgument, "horizon must be non-negative");
}

std::size_t DemandPath::size() const noexcept { return base_of(shape_).size(); }

std::string DemandPath::description() const {
  char buf[256];
  if (const auto* c = std::get_if<Constant>(&shape_)) {
    (void)c;
    std::snprintf(buf, sizeof buf, "constant horizon=%lld", static_cast<long long>(horizon_));
  } else if (const auto* s = std::get_if<Sigmoid>(&shape_)) {
    std::snprintf(buf, sizeof buf,
                  "sigmoid start_step=%lld midpoint_step=%.17g k_per_year=%.17g "
                  "steps_per_year=%.17g aggregate_scale=%.17g horizon=%lld",
                  static_cast<long long>(s->spec.startStep), s->spec.midpointStep,
                  s->spec.steepnessPerYear, s->spec.stepsPerYear, s->spec.aggregateScale,
                  static_cast<long long>(horizon_));
  } else {
    const auto& w = std::get<Sine>(shape_);
    std::snprintf(buf, sizeof buf,
                  "sine amplitude=%.17g period_steps=%.17g phase_steps=%.17g scale=%.17g "
                  "horizon=%lld",
                  w.amplitude, w.periodSteps, w.phaseSteps, w.scale,
                  static_cast<long long>(horizon_));
  }
  return buf;
}

void DemandPath::evaluate(std::int64_t t, std::span<double> out) const {
  if (t < 0 || t >= horizon_) {
    throw Error(ErrorKind::HorizonExceedsPath,
                "step " + std::to_string(t) + " outside demand path horizon " +
                    std::to_string(horizon_));
  }
  const auto& base = base_of(shape_);
  if (out.size() != base.size()) {
    throw Error(ErrorKind::DimensionMismatch, "demand output buffer has wrong size");
  }
  if (std::holds_alternative<Constant>(shape_)) {
    std::copy(base.begin(), base.end(), out.begin());
  } else if (const auto* s = std::get_if<Sigmoid>(&shape_)) {
    if (t < s->spec.startStep) {
      std::copy(base.begin(), base.end(), out.begin());
      return;
    }
    const double x = s->spec.steepness_per_step() * (static_cast<double>(t) - s->spec.midpointStep);
    const double remaining = 1.0 / (1.0 + std::exp(x));  // 1 -> 0 as t grows
    for (std::size_t i = 0; i < base.size(); ++i) {
      out[i] = s->post[i] + (base[i] - s->post[i]) * remaining;
    }
  } else {
    const auto& w = std::get<Sine>(shape_);
    const double phase =
        2.0 * std::numbers::pi * (static_cast<double>(t) + w.phaseSteps) / w.periodSteps;
    const double factor = w.scale * (1.0 + w.amplitude * std::sin(phase));
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] * factor;
  }
}

std::vector<double> DemandPath::at(std::int64_t t) const {
  std::vector<double> out(size());
  evaluate(t, out);
  return out;
}

double DemandPath::at(std::size_t i, std::int64_t t) const { return at(t).at(i); }

DemandPath DemandPath::with_horizon(std::int64_t horizon) const {
  return DemandPath(shape_, horizon);
}

DemandPath constant_path(std::vector<double> d0, std::int64_t horizon) {
  require_non_negative(d0, "target demand");
  return DemandPath(DemandPath::Constant{std::move(d0)}, horizon);
}

std::vector<double> post_shock_demand(std::span<const double> e0, const ScoreVector& p,
                                      double laborForce) {
  if (e0.size() != p.size()) {
    throw Error(ErrorKind::DimensionMismatch, "employment and scores differ in length");
  }
  p.validate();
  require_non_negative(e0, "employment");
  double employed = 0.0;
  double remaining = 0.0;
  for (std::size_t i = 0; i < e0.size(); ++i) {
    employed += e0[i];
    remaining += e0[i] * (1.0 - p[i]);
  }
  if (!(employed > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "initial employment must have a positive total");
  }
  if (!(remaining > 0.0)) {
    throw Error(ErrorKind::AllAutomated, "every job is automated; no demand to reallocate");
  }
  std::vector<double> d(e0.size());
  for (std::size_t i = 0; i < e0.size(); ++i) {
    d[i] = e0[i] * (1.0 - p[i]) / remaining * laborForce;
  }
  return d;
}

DemandPath sigmoid_path(std::vector<double> d0, std::vector<double> dPost,
                        const ShockSpec& spec, std::int64_t horizon) {
  spec.validate();
  if (d0.size() != dPost.size()) {
    throw Error(ErrorKind::DimensionMismatch, "pre- and post-shock demand differ in length");
  }
  require_non_negative(d0, "pre-shock demand");
  require_non_negative(dPost, "post-shock demand");
  for (double& x : dPost) x *= spec.aggregateScale;
  return DemandPath(DemandPath::Sigmoid{std::move(d0), std::move(dPost), spec}, horizon);
}

DemandPath sine_path(std::vector<double> d0, double amplitude, double periodYears,
                     double stepsPerYear, std::int64_t horizon, double phaseYears) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) {
    throw Error(ErrorKind::AmplitudeOutOfRange, "cycle amplitude must lie in [0, 1)");
  }
  if (!(periodYears > 0.0) || !(stepsPerYear > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "cycle period must be positive");
  }
  require_non_negative(d0, "target demand");
  DemandPath::Sine w;
  w.base = std::move(d0);
  w.amplitude = amplitude;
  w.periodSteps = periodYears * stepsPerYear;
  w.phaseSteps = phaseYears * stepsPerYear;
  return DemandPath(std::move(w), horizon);
}

ScoreVector shuffle_scores(const ScoreVector& p, std::uint64_t seed) {
  ScoreVector out = p;
  auto rng = RandomStreams(seed).stream(0, StreamPhase::Shuffle, 0);
  for (std::size_t k = out.values.size(); k > 1; --k) {
    const std::size_t j = rng.uniform_index(k);
    std::swap(out.values[k - 1], out.values[j]);
  }
  return out;
}

DemandPath scale_aggregate(const DemandPath& path, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  DemandPath::Shape shape = path.shape();
  if (auto* c = std::get_if<DemandPath::Constant>(&shape)) {
    for (double& x : c->base) x *= factor;
  } else if (auto* s = std::get_if<DemandPath::Sigmoid>(&shape)) {
    for (double& x : s->post) x *= factor;
    s->spec.aggregateScale *= factor;
  } else {
    std::get<DemandPath::Sine>(shape).scale *= factor;
  }
  return DemandPath(std::move(shape), path.horizon());
}

}  // namespace labornet
