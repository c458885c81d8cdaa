#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "edsense/numerics.hpp"
#include "oracles.hpp"

using namespace edsense;
using numerics::Tolerance;

TEST_CASE("erfc fixed points") {
  CHECK(numerics::erfc(0.0) == 1.0);
  CHECK(numerics::erfc(-0.7) + numerics::erfc(0.7) == doctest::Approx(2.0).epsilon(1e-15));
  // 50-digit reference: erfc(1) = 0.157299207050285130658...
  CHECK(std::abs(numerics::erfc(1.0) - 0.15729920705028513) < 1e-15);
  CHECK(std::abs(numerics::erfc(1.0) - oracle::erfc50(1.0)) < 1e-15 * oracle::erfc50(1.0));
}

TEST_CASE("erfc matches high-precision reference to 1e-12 relative over |x| <= 25") {
  for (double x = -25.0; x <= 25.0; x += 0.01) {
    const double ref = oracle::erfc50(x);
    const double got = numerics::erfc(x);
    INFO("x = " << x);
    REQUIRE(std::abs(got - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("erfc saturates and rejects non-finite input") {
  CHECK(numerics::erfc(30.0) == 0.0);
  CHECK(numerics::erfc(-30.0) == 2.0);
  CHECK_THROWS_AS(numerics::erfc(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(numerics::erfc(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("erfc is strictly decreasing on [-10, 10]") {
  double prev = numerics::erfc(-10.0);
  for (double x = -10.0 + 1e-3; x <= 10.0; x += 1e-3) {
    const double v = numerics::erfc(x);
    // Below about -5 a 1e-3 step no longer moves 2 - erfc(|x|) by one ulp.
    if (x > -5.0) REQUIRE(v < prev);
    REQUIRE(v <= prev);
    prev = v;
  }
}

TEST_CASE("reg_lower_gamma examples") {
  CHECK(numerics::reg_lower_gamma(1.0, 0.5) == doctest::Approx(-std::expm1(-0.5)).epsilon(1e-14));
  CHECK(numerics::reg_lower_gamma(2.0, 0.0) == 0.0);
  CHECK(std::abs(numerics::reg_lower_gamma(2.0, 2.0) - (1.0 - std::exp(-2.0) * 3.0)) < 1e-15);
  CHECK(std::abs(numerics::reg_lower_gamma(2.0, 2.0) - 0.59399415029016192) < 1e-15);
  CHECK_THROWS_AS(numerics::reg_lower_gamma(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(numerics::reg_lower_gamma(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(numerics::reg_lower_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("reg_lower_gamma matches high-precision reference and stays in [0,1] monotone") {
  for (double a : {0.3, 0.5, 1.0, 2.0, 3.0, 4.5, 10.0, 37.0}) {
    double prev = 0.0;
    for (double x = 0.0; x <= 4.0 * a + 20.0; x += 0.05) {
      const double got = numerics::reg_lower_gamma(a, x);
      INFO("a = " << a << " x = " << x);
      REQUIRE(std::abs(got - oracle::gamma_p50(a, x)) <= 1e-12);
      REQUIRE(got >= 0.0);
      REQUIRE(got <= 1.0);
      REQUIRE(got >= prev);
      prev = got;
      REQUIRE(std::abs(numerics::reg_upper_gamma(a, x) - (1.0 - oracle::gamma_p50(a, x))) <=
              1e-12);
    }
  }
}

TEST_CASE("bisect examples") {
  const Tolerance tol{1e-12, 200};
  CHECK(numerics::bisect([](double x) { return x - 3.0; }, 0.0, 10.0, tol) ==
        doctest::Approx(3.0).epsilon(1e-11));
  CHECK(std::abs(numerics::bisect([](double x) { return numerics::erfc(x) - 1.0; }, -1.0, 1.0,
                                  tol)) < 1e-11);

  // Grid oracle: tabulate the closed-form Erlang CDF 1 - e^{-x}(1+x) on a 1e-6
  // grid and interpolate the 0.5 crossing.
  double root = 0.0;
  double prev_x = 0.0;
  double prev_f = -0.5;
  for (int i = 1; i <= 10000000; ++i) {
    const double x = i * 1e-6;
    const double f = 1.0 - std::exp(-x) * (1.0 + x) - 0.5;
    if (f >= 0.0) {
      root = prev_x + (x - prev_x) * (-prev_f) / (f - prev_f);
      break;
    }
    prev_x = x;
    prev_f = f;
  }
  CHECK(root == doctest::Approx(1.67834699).epsilon(1e-8));
  const double got =
      numerics::bisect([](double x) { return numerics::reg_lower_gamma(2.0, x) - 0.5; }, 0.0,
                       10.0, tol);
  CHECK(std::abs(got - root) < 1e-10);
}

TEST_CASE("bisect errors") {
  CHECK_THROWS_AS(numerics::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
  CHECK_THROWS_AS(numerics::bisect([](double x) { return x - 0.1234567; }, 0.0, 1.0,
                                   Tolerance{1e-15, 3}),
                  ConvergenceError);
  CHECK_THROWS_AS(numerics::bisect([](double x) { return x; }, -1.0, 1.0, Tolerance{0.0, 10}),
                  DomainError);
}

TEST_CASE("bisect on random strictly monotone functions lands within tolerance") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coef(0.1, 5.0);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = coef(gen);
    const double b = coef(gen);
    const double c = shift(gen);
    const double sign = trial % 2 ? 1.0 : -1.0;
    auto f = [=](double x) { return sign * (a * x * x * x + b * x + c); };
    const Tolerance tol{1e-10, 300};
    const double x = numerics::bisect(f, -10.0, 10.0, tol);
    // Either the image is within tolerance or the bracket shrank below it, in
    // which case the image is bounded by the slope times the bracket.
    const double slope = 3.0 * a * x * x + b;
    REQUIRE(std::abs(f(x)) <= std::max(tol.abs_tol, slope * tol.abs_tol));
  }
}
