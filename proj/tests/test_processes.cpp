#include <doctest.h>

#include <cmath>

#include "lazysched/errors.hpp"
#include "lazysched/processes.hpp"

using namespace lazysched;

namespace {

ArrivalChain paper_chain() {
  ArrivalChain chain;
  chain.transition = {{0.9, 0.1}, {0.58, 0.42}};
  chain.lengths = {0.0, 80000.0};
  return chain;
}

}  // namespace

TEST_CASE("stationary distribution of the two-state chain") {
  const std::vector<double> pi = stationary_distribution(paper_chain());
  // pi_1 = q01 / (q01 + q10) = 0.1 / 0.68.
  CHECK(pi[1] == doctest::Approx(0.1 / 0.68).epsilon(1e-12));
  CHECK(pi[0] + pi[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean_arrival_bits(paper_chain()) ==
        doctest::Approx(80000.0 * 0.1 / 0.68).epsilon(1e-12));
}

TEST_CASE("reducible chains have no unique stationary distribution") {
  ArrivalChain chain;
  chain.transition = {{1.0, 0.0}, {0.0, 1.0}};  // two absorbing states
  chain.lengths = {0.0, 100.0};
  CHECK_THROWS_AS(stationary_distribution(chain), NoStationaryDistribution);
}

TEST_CASE("expected_future_arrivals: one-step and zero-length cases") {
  const ArrivalChain chain = paper_chain();
  CHECK(expected_future_arrivals(chain, 0, 1) ==
        doctest::Approx(0.1 * 80000.0).epsilon(1e-12));
  CHECK(expected_future_arrivals(chain, 0, 0) == 0.0);

  ArrivalChain zero = chain;
  zero.lengths = {0.0, 0.0};
  CHECK(expected_future_arrivals(zero, 0, 10) == 0.0);
  CHECK(expected_future_arrivals(zero, 1, 10) == 0.0);
}

TEST_CASE("expected_future_arrivals approaches the stationary ramp") {
  const ArrivalChain chain = paper_chain();
  // For large a the per-slot increment approaches pi_1 * 80000.
  const double rate = 80000.0 * 0.1 / 0.68;
  const double at_1000 = expected_future_arrivals(chain, 0, 1000);
  const double at_1001 = expected_future_arrivals(chain, 0, 1001);
  CHECK(at_1001 - at_1000 == doctest::Approx(rate).epsilon(1e-9));
}

TEST_CASE("expected_future_arrivals is nondecreasing in the window") {
  const ArrivalChain chain = paper_chain();
  for (int i = 0; i < 2; ++i) {
    double prev = 0.0;
    for (int a = 1; a <= 40; ++a) {
      const double v = expected_future_arrivals(chain, i, a);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("validation rejects malformed processes") {
  ArrivalChain chain = paper_chain();
  chain.transition[0][0] = 0.95;  // row no longer sums to 1
  CHECK_THROWS_AS(chain.validate(), std::invalid_argument);

  FadingProcess fading;
  fading.gains = {30.0, -1.0};
  fading.probabilities = {0.5, 0.5};
  CHECK_THROWS_AS(fading.validate(), std::invalid_argument);

  HarvestProcess harvest;
  harvest.p_event = 1.5;
  CHECK_THROWS_AS(harvest.validate(), std::invalid_argument);
}
