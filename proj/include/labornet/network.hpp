#pragma once

// Occupational mobility network: construction, validation, score mapping.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "labornet/matrix.hpp"

namespace labornet {

/// Observed job-to-job moves between occupations, T(i, j) = workers i -> j.
struct TransitionCounts {
  std::vector<std::string> labels;
  DenseMatrix<std::int64_t> counts;
};

/// Row-stochastic adjacency with a uniform self-loop weight. Immutable.
class Network {
 public:
  /// Validates: square, labels match, entries in [0,1], diagonal == selfLoop,
  /// every row sums to 1 within 1e-12.
  Network(std::vector<std::string> labels, DenseMatrix<double> adjacency, double selfLoop);

  std::size_t size() const noexcept { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return adjacency_(i, j); }
  std::span<const double> row(std::size_t i) const { return adjacency_.row(i); }
  const DenseMatrix<double>& adjacency() const noexcept { return adjacency_; }
  double self_loop() const noexcept { return selfLoop_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  DenseMatrix<double> adjacency_;
  double selfLoop_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr double kRowSumTolerance = 1e-12;

/// A(i,i) = r, A(i,j) = (1 - r) T(i,j) / sum_{k != i} T(i,k). The diagonal of
/// the counts is ignored. Throws IsolatedOccupation for a row with no
/// off-diagonal moves.
Network build_network(const TransitionCounts& counts, double r);

/// All entries 1/n (self-loops included). Labels default to "0".."n-1".
Network complete_network(std::size_t n);
Network complete_network(std::vector<std::string> labels);

/// Automation levels aligned with a network's labels, each in [0, 1].
struct ScoreVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  void validate() const;  ///< throws ScoreOutOfRange
};

struct RawScore {
  std::string source;
  double score = 0.0;
  double weight = 1.0;  ///< employment weight; 1 when the source gives none
};

struct CrosswalkRow {
  std::string source;
  std::string target;
};

/// Weighted mean of every source score mapped onto each target label.
/// Throws UnmappedOccupation (listing labels) for targets with no source,
/// ScoreOutOfRange for a score outside [0,1], InvalidArgument for a negative
/// weight or a crosswalk target that is not a network label.
ScoreVector map_scores(std::span<const RawScore> raw,
                       std::span<const CrosswalkRow> crosswalk,
                       std::span<const std::string> targetLabels);

}  // namespace labornet
