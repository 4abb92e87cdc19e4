#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "labornet/error.hpp"
#include "labornet/network.hpp"
#include "labornet/random.hpp"

using namespace labornet;

namespace {

TransitionCounts counts(std::vector<std::vector<std::int64_t>> rows) {
  TransitionCounts t;
  const std::size_t n = rows.size();
  t.counts = DenseMatrix<std::int64_t>(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    t.labels.push_back("o" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) t.counts(i, j) = rows[i][j];
  }
  return t;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("two occupations with one partner each") {
  const Network net = build_network(counts({{0, 4}, {1, 0}}), 0.5);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(net(i, j) == 0.5);
}

TEST_CASE("off-diagonal normalization with r = 0") {
  const Network net = build_network(counts({{0, 3, 1}, {1, 0, 1}, {2, 2, 0}}), 0.0);
  CHECK(net(0, 0) == 0.0);
  CHECK(net(0, 1) == 0.75);
  CHECK(net(0, 2) == 0.25);
}

TEST_CASE("the diagonal of the counts is ignored") {
  const Network a = build_network(counts({{0, 3, 1}, {1, 0, 1}, {2, 2, 0}}), 0.55);
  const Network b = build_network(counts({{500, 3, 1}, {1, 7, 1}, {2, 2, 9}}), 0.55);
  CHECK(a.adjacency() == b.adjacency());
  CHECK(a(1, 1) == 0.55);
  CHECK(a.self_loop() == 0.55);
}

TEST_CASE("isolated rows and bad inputs are errors") {
  CHECK(kind_of([] { build_network(counts({{0, 1}, {0, 3}}), 0.5); }) == ErrorKind::IsolatedOccupation);
  CHECK(kind_of([] { build_network(counts({{0, 1}, {1, 0}}), 1.5); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_network(counts({{0, -1}, {1, 0}}), 0.5); }) == ErrorKind::InvalidArgument);
  TransitionCounts ragged = counts({{0, 1}, {1, 0}});
  ragged.labels.push_back("extra");
  CHECK(kind_of([&] { build_network(ragged, 0.5); }) == ErrorKind::DimensionMismatch);
  TransitionCounts dup = counts({{0, 1}, {1, 0}});
  dup.labels[1] = dup.labels[0];
  CHECK(kind_of([&] { build_network(dup, 0.5); }) == ErrorKind::DuplicateCode);
}

TEST_CASE("complete networks") {
  const Network four = complete_network(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(four(i, j) == 0.25);
  CHECK(four.self_loop() == 0.25);
  const Network one = complete_network(1);
  CHECK(one(0, 0) == 1.0);
  const Network big = complete_network(464);
  for (std::size_t i = 0; i < big.size(); ++i) {
    double s = 0.0;
    for (const double x : big.row(i)) s += x;
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  CHECK(kind_of([] { complete_network(0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("label lookup") {
  const Network net = complete_network({"a", "b", "c"});
  CHECK(net.index_of("b") == 1u);
  CHECK_FALSE(net.index_of("z").has_value());
}

TEST_CASE("rows sum to one for random counts") {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(30);
    TransitionCounts t;
    t.counts = DenseMatrix<std::int64_t>(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      t.labels.push_back(std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.uniform01() < 0.3) t.counts(i, j) = static_cast<std::int64_t>(rng.uniform_index(100000));
      }
      t.counts(i, (i + 1) % n) += 1;
    }
    const double r = rng.uniform01();
    const Network net = build_network(t, r);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (const double x : net.row(i)) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
      CHECK(net(i, i) == r);
    }
  }
}

TEST_CASE("scaling a row of counts leaves the network unchanged") {
  Xoshiro256 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(10);
    TransitionCounts t;
    t.counts = DenseMatrix<std::int64_t>(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      t.labels.push_back(std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) t.counts(i, j) = 1 + static_cast<std::int64_t>(rng.uniform_index(50));
    }
    TransitionCounts scaled = t;
    const std::size_t row = rng.uniform_index(n);
    const auto factor = static_cast<std::int64_t>(2 + rng.uniform_index(9));
    for (std::size_t j = 0; j < n; ++j) scaled.counts(row, j) *= factor;
    const Network a = build_network(t, 0.4);
    const Network b = build_network(scaled, 0.4);
    for (std::size_t j = 0; j < n; ++j) CHECK(b(row, j) == doctest::Approx(a(row, j)).epsilon(1e-15));
  }
}

TEST_CASE("score mapping") {
  const std::vector<std::string> labels = {"T"};
  SUBCASE("unweighted mean") {
    const std::vector<RawScore> raw = {{"a", 0.2, 1.0}, {"b", 0.8, 1.0}};
    const std::vector<CrosswalkRow> cw = {{"a", "T"}, {"b", "T"}};
    CHECK(map_scores(raw, cw, labels)[0] == doctest::Approx(0.5));
  }
  SUBCASE("identity") {
    const std::vector<RawScore> raw = {{"a", 0.72, 1.0}};
    const std::vector<CrosswalkRow> cw = {{"a", "T"}};
    CHECK(map_scores(raw, cw, labels)[0] == 0.72);
  }
  SUBCASE("weighted mean") {
    const std::vector<RawScore> raw = {{"a", 0.0, 3.0}, {"b", 1.0, 1.0}};
    const std::vector<CrosswalkRow> cw = {{"a", "T"}, {"b", "T"}};
    // (3 * 0 + 1 * 1) / (3 + 1)
    CHECK(map_scores(raw, cw, labels)[0] == doctest::Approx(0.25));
  }
}

TEST_CASE("score mapping errors") {
  const std::vector<std::string> labels = {"X", "Y", "Z"};
  const std::vector<CrosswalkRow> cw = {{"a", "X"}};
  const std::vector<RawScore> raw = {{"a", 0.5, 1.0}};
  try {
    map_scores(raw, cw, labels);
    FAIL("expected UnmappedOccupation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnmappedOccupation);
    CHECK(std::string(e.what()).find("Y, Z") != std::string::npos);
  }
  const std::vector<RawScore> bad = {{"a", 1.2, 1.0}};
  const std::vector<CrosswalkRow> one = {{"a", "X"}, {"a", "Y"}, {"a", "Z"}};
  CHECK(kind_of([&] { map_scores(bad, one, labels); }) == ErrorKind::ScoreOutOfRange);
  const std::vector<RawScore> neg = {{"a", 0.2, -1.0}};
  CHECK(kind_of([&] { map_scores(neg, one, labels); }) == ErrorKind::InvalidArgument);
  const std::vector<CrosswalkRow> unknown = {{"a", "nowhere"}};
  CHECK(kind_of([&] { map_scores(raw, unknown, labels); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("mapped scores lie within the range of their sources") {
  Xoshiro256 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> labels = {"A", "B", "C"};
    std::vector<RawScore> raw;
    std::vector<CrosswalkRow> cw;
    double lo = 1.0, hi = 0.0;
    for (int k = 0; k < 12; ++k) {
      const std::string src = "s" + std::to_string(k);
      const double s = rng.uniform01();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      raw.push_back({src, s, rng.uniform01() * 5.0 + 0.01});
      cw.push_back({src, labels[static_cast<std::size_t>(k) % 3]});
    }
    const ScoreVector p = map_scores(raw, cw, labels);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(p[i] >= lo);
      CHECK(p[i] <= hi);
    }
  }
}

}  // TEST_SUITE
