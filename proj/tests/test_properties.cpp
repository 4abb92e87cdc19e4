#include <doctest.h>

#include "labornet/random.hpp"
#include "support/conservation.hpp"

using namespace labornet;

TEST_SUITE("properties") {

TEST_CASE("workers are conserved in 1000 random configurations") {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto r = testing::run_conservation_case(replica_seed(0xC0FFEE, k));
    CAPTURE(r.config.seed);
    CAPTURE(r.config.scenario);
    CHECK(r.abmWorkerErrors == 0);
    CHECK(r.meanfieldRelError <= 1e-9);
    CHECK(r.ltuViolations == 0);
    CHECK(r.negativeCounts == 0);
  }
}

}  // TEST_SUITE
