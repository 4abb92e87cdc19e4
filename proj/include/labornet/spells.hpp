#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "labornet/error.hpp"

namespace labornet {

/// Unemployment spell histogram per occupation.
///
/// Bin b (0-based) holds workers whose current spell is b + 1 steps long.
/// The last bin is an overflow bin collecting every spell of length >= bins().
template <typename T>
class SpellHistogram {
 public:
  SpellHistogram() = default;
  SpellHistogram(std::size_t occupations, std::size_t bins)
      : occupations_(occupations), bins_(bins), counts_(occupations * bins, T{}) {
    if (bins == 0) {
      throw Error(ErrorKind::InvalidArgument, "spell histogram needs at least one bin");
    }
  }

  std::size_t occupations() const noexcept { return occupations_; }
  std::size_t bins() const noexcept { return bins_; }

  T& operator()(std::size_t i, std::size_t bin) { return counts_[i * bins_ + bin]; }
  const T& operator()(std::size_t i, std::size_t bin) const {
    return counts_[i * bins_ + bin];
  }

  std::span<T> row(std::size_t i) { return {counts_.data() + i * bins_, bins_}; }
  std::span<const T> row(std::size_t i) const {
    return {counts_.data() + i * bins_, bins_};
  }

  T total(std::size_t i) const {
    const auto r = row(i);
    return std::accumulate(r.begin(), r.end(), T{});
  }

  /// Workers in occupation i unemployed for at least `tau` steps.
  T at_least(std::size_t i, std::int64_t tau) const {
    const auto r = row(i);
    const std::size_t first =
        tau <= 1 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(tau - 1), bins_ - 1);
    return std::accumulate(r.begin() + static_cast<std::ptrdiff_t>(first), r.end(), T{});
  }

  friend bool operator==(const SpellHistogram&, const SpellHistogram&) = default;

 private:
  std::size_t occupations_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> counts_;
};

/// Default histogram depth: ten long-term thresholds.
inline std::size_t default_spell_bins(std::int64_t tauSteps) {
  return static_cast<std::size_t>(10 * std::max<std::int64_t>(tauSteps, 1));
}

}  // namespace labornet
