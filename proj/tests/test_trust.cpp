#include <doctest.h>

#include <cmath>

#include "argus/error.hpp"
#include "argus/trust.hpp"
#include "support/oracle.hpp"

using namespace argus;
using namespace argus::trust;

namespace {

WeightingParams g(double gamma) { return {.gamma = gamma}; }

}  // namespace

TEST_CASE("forward weighting matches the direct formula") {
  for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.85, 1.0}) {
    for (int i = 0; i <= 100; ++i) {
      const double p = i / 100.0;
      CHECK(trust_of_probability(p, g(gamma)) == doctest::Approx(oracle::weight(p, gamma)).epsilon(1e-14));
    }
  }
}

TEST_CASE("endpoints and the identity case") {
  for (double gamma : {0.2, 0.5, 1.0}) {
    CHECK(trust_of_probability(0.0, g(gamma)) == 0.0);
    CHECK(trust_of_probability(1.0, g(gamma)) == 1.0);
  }
  CHECK(probability_of_trust(0.0, g(0.6)) == 0.0);
  CHECK(probability_of_trust(1.0, g(0.6)) == 1.0);
  for (double tau : {0.1, 0.37, 0.9}) CHECK(probability_of_trust(tau, g(1.0)) == tau);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(trust_of_probability(-0.1, g(0.5)), DomainError);
  CHECK_THROWS_AS(trust_of_probability(0.5, g(0.0)), DomainError);
  CHECK_THROWS_AS(trust_of_probability(0.5, g(1.5)), DomainError);
  CHECK_THROWS_AS(probability_of_trust(1.1, g(0.5)), DomainError);
  CHECK_THROWS_AS(probability_of_trust(0.5, g(0.29)), NonMonotoneGamma);
  CHECK_NOTHROW(probability_of_trust(0.5, g(0.3)));
}

TEST_CASE("inversion agrees with bisection") {
  for (double gamma : {0.3, 0.4, 0.55, 0.7, 0.85, 0.95}) {
    for (int i = 1; i < 100; ++i) {
      const double tau = i / 100.0;
      CHECK(probability_of_trust(tau, g(gamma)) ==
            doctest::Approx(oracle::inverse_weight(tau, gamma)).epsilon(1e-8));
    }
  }
}

TEST_CASE("worked inversion at tau 0.6, gamma 0.85") {
  // Solved exactly this is 0.62935, not the rounded 0.62.
  const double p = probability_of_trust(0.6, g(0.85));
  CHECK(p == doctest::Approx(0.629348).epsilon(1e-5));
  CHECK(trust_of_probability(p, g(0.85)) == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(std::abs(trust_of_probability(0.62, g(0.85)) - 0.592) < 0.001);
}

TEST_CASE("curve is monotone from the inversion threshold up") {
  for (double gamma : {0.3, 0.4, 0.6, 0.8, 1.0}) {
    double prev = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      const double cur = trust_of_probability(i / 10000.0, g(gamma));
      REQUIRE(cur > prev);
      prev = cur;
    }
  }
  // Below the threshold the curve bends back.
  bool dips = false;
  double prev = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double cur = trust_of_probability(i / 10000.0, g(0.2));
    dips = dips || cur < prev;
    prev = cur;
  }
  CHECK(dips);
}

TEST_CASE("derivative matches a central difference") {
  for (double gamma : {0.4, 0.7, 1.0}) {
    for (double p : {0.05, 0.3, 0.5, 0.8, 0.97}) {
      const double h = 1e-6;
      const double numeric =
          (trust_of_probability(p + h, g(gamma)) - trust_of_probability(p - h, g(gamma))) / (2 * h);
      CHECK(trust_derivative(p, g(gamma)) == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("round trip p -> tau -> p") {
  for (int k = 4; k <= 10; ++k) {
    const double gamma = k / 10.0;
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      REQUIRE(std::abs(probability_of_trust(trust_of_probability(p, g(gamma)), g(gamma)) - p) <= 1e-6);
    }
  }
}

TEST_CASE("iteration budget") {
  WeightingParams tight{.gamma = 0.4, .tolerance = 0.0, .max_iterations = 1};
  CHECK_THROWS_AS(probability_of_trust(0.9, tight), ConvergenceFailure);
}
