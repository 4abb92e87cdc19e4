#pragma once

// Synthetic networks for tests. Deterministic in their seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "labornet/network.hpp"
#include "labornet/random.hpp"

namespace labornet::testing {

/// Occupation-like network: node i moves workers to a handful of partners
/// (out-degree drawn from a heavy-tailed law, partners favoring low indices so
/// in-degrees are uneven too), with random integer counts. A ring of light
/// links i -> i+1 keeps it strongly connected, so no occupation drains away.
inline TransitionCounts synthetic_counts(std::size_t n, std::uint64_t seed) {
  TransitionCounts t;
  for (std::size_t i = 0; i < n; ++i) t.labels.push_back("occ" + std::to_string(i));
  t.counts = DenseMatrix<std::int64_t>(n, n, 0);
  Xoshiro256 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    // Pareto-like degree between 1 and n - 1.
    const double u = 1.0 - rng.uniform01();
    auto degree = static_cast<std::size_t>(2.0 / std::pow(u, 0.8));
    degree = std::clamp<std::size_t>(degree, 1, n - 1);
    for (std::size_t k = 0; k < degree; ++k) {
      std::size_t j = i;
      while (j == i) {
        // Squared uniform favors popular destinations.
        const double x = rng.uniform01();
        j = static_cast<std::size_t>(x * x * static_cast<double>(n));
      }
      t.counts(i, j) += 1 + static_cast<std::int64_t>(rng.uniform_index(50));
    }
    t.counts(i, (i + 1) % n) += 1;
  }
  return t;
}

inline Network synthetic_network(std::size_t n, std::uint64_t seed, double r) {
  return build_network(synthetic_counts(n, seed), r);
}

/// Two dense blocks of `perBlock` occupations; a fraction `cross` of each
/// node's moves go to the other block.
inline Network two_block_network(std::size_t perBlock, double r, double cross) {
  const std::size_t n = 2 * perBlock;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("b" + std::to_string(i));
  DenseMatrix<double> a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t block = i / perBlock;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        a(i, j) = r;
        continue;
      }
      const bool same = j / perBlock == block;
      const double w = same ? (1.0 - cross) / static_cast<double>(perBlock - 1)
                            : cross / static_cast<double>(perBlock);
      a(i, j) = (1.0 - r) * w;
    }
  }
  return Network(std::move(labels), std::move(a), r);
}

}  // namespace labornet::testing
