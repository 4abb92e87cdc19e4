#include "labornet/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "labornet/error.hpp"

namespace labornet {

namespace {

// Floors plus one unit for the largest fractional parts until the total is
// reached. Ties go to the lower index.
std::vector<std::int64_t> largest_remainder(std::span<const double> x, std::int64_t total) {
  std::vector<std::int64_t> out(x.size(), 0);
  std::vector<double> frac(x.size(), 0.0);
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = std::max(0.0, x[k]);
    const double f = std::floor(v);
    out[k] = static_cast<std::int64_t>(f);
    frac[k] = v - f;
    assigned += out[k];
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  std::size_t k = 0;
  while (assigned < total && !order.empty()) {
    ++out[order[k % order.size()]];
    ++assigned;
    ++k;
  }
  // Overshoot can only come from floating-point excess; take back from the
  // smallest fractional parts that still hold a unit.
  for (std::size_t r = order.size(); assigned > total && r > 0; --r) {
    auto& c = out[order[r - 1]];
    const std::int64_t take = std::min(c, assigned - total);
    c -= take;
    assigned -= take;
  }
  return out;
}

}  // namespace

std::int64_t LaborState::workers() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < size(); ++i) total += employed[i] + unemployed_in(i);
  return total;
}

void LaborState::validate(std::int64_t laborForce) const {
  if (vacancies.size() != employed.size() || unemployed.occupations() != employed.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state vectors differ in length");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (employed[i] < 0 || vacancies[i] < 0) {
      throw Error(ErrorKind::InvalidArgument,
                  "negative count in occupation " + std::to_string(i));
    }
    for (const auto c : unemployed.row(i)) {
      if (c < 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "negative spell count in occupation " + std::to_string(i));
      }
    }
  }
  if (laborForce >= 0 && workers() != laborForce) {
    throw Error(ErrorKind::InvalidArgument,
                "state holds " + std::to_string(workers()) + " workers, expected " +
                    std::to_string(laborForce));
  }
}

double MeanState::workers() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += employed[i] + unemployed[i];
  return total;
}

MeanState to_mean_state(const LaborState& state) {
  MeanState out(state.size(), state.unemployed.bins());
  for (std::size_t i = 0; i < state.size(); ++i) {
    out.employed[i] = static_cast<double>(state.employed[i]);
    out.vacancies[i] = static_cast<double>(state.vacancies[i]);
    out.unemployed[i] = static_cast<double>(state.unemployed_in(i));
    for (std::size_t b = 0; b < state.unemployed.bins(); ++b) {
      out.spells(i, b) = static_cast<double>(state.unemployed(i, b));
    }
  }
  return out;
}

LaborState round_to_labor_state(const MeanState& state, std::int64_t laborForce) {
  if (laborForce < 0) throw Error(ErrorKind::InvalidArgument, "labor force must be non-negative");
  const std::size_t n = state.size();
  const std::size_t bins = state.spells.bins();
  const double total = state.workers();
  if (!(total > 0.0) && laborForce > 0) {
    throw Error(ErrorKind::InvalidArgument, "cannot apportion workers over an empty state");
  }
  const double scale = total > 0.0 ? static_cast<double>(laborForce) / total : 0.0;

  std::vector<double> cells(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    cells[2 * i] = state.employed[i] * scale;
    cells[2 * i + 1] = state.unemployed[i] * scale;
  }
  const auto counts = largest_remainder(cells, laborForce);

  LaborState out(n, bins);
  for (std::size_t i = 0; i < n; ++i) {
    out.employed[i] = counts[2 * i];
    out.vacancies[i] = std::max<std::int64_t>(0, std::llround(state.vacancies[i]));
    const std::int64_t u = counts[2 * i + 1];
    if (u == 0) continue;
    const auto row = state.spells.row(i);
    const double spellTotal = std::accumulate(row.begin(), row.end(), 0.0);
    std::vector<double> share(bins, 0.0);
    if (spellTotal > 0.0) {
      for (std::size_t b = 0; b < bins; ++b) share[b] = row[b] / spellTotal * static_cast<double>(u);
    } else {
      share[0] = static_cast<double>(u);
    }
    const auto spells = largest_remainder(share, u);
    for (std::size_t b = 0; b < bins; ++b) out.unemployed(i, b) = spells[b];
  }
  return out;
}

}  // namespace labornet
