#include "labornet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "labornet/error.hpp"

namespace labornet {

Network::Network(std::vector<std::string> labels, DenseMatrix<double> adjacency,
                 double selfLoop)
    : labels_(std::move(labels)), adjacency_(std::move(adjacency)), selfLoop_(selfLoop) {
  const std::size_t n = labels_.size();
  if (adjacency_.rows() != n || adjacency_.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "adjacency is " + std::to_string(adjacency_.rows()) + "x" +
                    std::to_string(adjacency_.cols()) + " but there are " +
                    std::to_string(n) + " labels");
  }
  if (!(selfLoop_ >= 0.0 && selfLoop_ <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "self-loop weight must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(ErrorKind::DuplicateCode, "duplicate occupation label '" + labels_[i] + "'");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!(a >= 0.0 && a <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "adjacency entry (" + labels_[i] + ", " + labels_[j] + ") outside [0, 1]");
      }
      sum += a;
    }
    if (adjacency_(i, i) != selfLoop_) {
      throw Error(ErrorKind::InvalidArgument,
                  "diagonal entry of '" + labels_[i] + "' differs from the self-loop weight");
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorKind::InvalidArgument,
                  "row '" + labels_[i] + "' sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

std::optional<std::size_t> Network::index_of(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Network build_network(const TransitionCounts& t, double r) {
  const std::size_t n = t.labels.size();
  if (t.counts.rows() != n || t.counts.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "transition counts are not n x n");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "r must lie in [0, 1]");
  }
  DenseMatrix<double> a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t c = t.counts(i, j);
      if (c < 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "negative transition count from '" + t.labels[i] + "'");
      }
      if (j != i) total += c;
    }
    if (total == 0) {
      throw Error(ErrorKind::IsolatedOccupation,
                  "occupation '" + t.labels[i] + "' (row " + std::to_string(i) +
                      ") has no transitions to other occupations");
    }
    const double off = 1.0 - r;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        a(i, j) = r;
      } else {
        a(i, j) = off * (static_cast<double>(t.counts(i, j)) / static_cast<double>(total));
      }
    }
  }
  return Network(t.labels, std::move(a), r);
}

Network complete_network(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return complete_network(std::move(labels));
}

Network complete_network(std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "complete network needs n >= 1");
  const double w = 1.0 / static_cast<double>(n);
  return Network(std::move(labels), DenseMatrix<double>(n, n, w), w);
}

void ScoreVector::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw Error(ErrorKind::ScoreOutOfRange,
                  "score " + std::to_string(values[i]) + " at position " +
                      std::to_string(i) + " outside [0, 1]");
    }
  }
}

ScoreVector map_scores(std::span<const RawScore> raw,
                       std::span<const CrosswalkRow> crosswalk,
                       std::span<const std::string> targetLabels) {
  std::unordered_map<std::string, std::size_t> targetIndex;
  for (std::size_t i = 0; i < targetLabels.size(); ++i) targetIndex.emplace(targetLabels[i], i);

  std::unordered_map<std::string, std::vector<std::size_t>> targetsOf;
  for (const auto& row : crosswalk) {
    const auto it = targetIndex.find(row.target);
    if (it == targetIndex.end()) {
      throw Error(ErrorKind::InvalidArgument,
                  "crosswalk target '" + row.target + "' is not an occupation of the network");
    }
    auto& list = targetsOf[row.source];
    if (std::find(list.begin(), list.end(), it->second) == list.end()) {
      list.push_back(it->second);
    }
  }

  std::vector<double> weighted(targetLabels.size(), 0.0);
  std::vector<double> weights(targetLabels.size(), 0.0);
  for (const auto& s : raw) {
    if (!(s.score >= 0.0 && s.score <= 1.0)) {
      throw Error(ErrorKind::ScoreOutOfRange,
                  "score of '" + s.source + "' is " + std::to_string(s.score));
    }
    if (!(s.weight >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "negative weight for '" + s.source + "'");
    }
    const auto it = targetsOf.find(s.source);
    if (it == targetsOf.end()) continue;
    for (const std::size_t t : it->second) {
      weighted[t] += s.weight * s.score;
      weights[t] += s.weight;
    }
  }

  ScoreVector out;
  out.values.resize(targetLabels.size());
  std::string missing;
  for (std::size_t i = 0; i < targetLabels.size(); ++i) {
    if (weights[i] > 0.0) {
      // Clamp roundoff so a convex combination stays inside [0, 1].
      out.values[i] = std::clamp(weighted[i] / weights[i], 0.0, 1.0);
    } else {
      if (!missing.empty()) missing += ", ";
      missing += targetLabels[i];
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::UnmappedOccupation, "no scores mapped to: " + missing);
  }
  return out;
}

}  // namespace labornet
