#include <cmath>
#include <random>

#include "doctest.h"
#include "wft/flux.hpp"

using wft::FluxModel;
using wft::Rational;
using wft::rankine_hugoniot_speed;
using wft::secant_speed;

TEST_CASE("secant speed examples") {
  auto burgers = FluxModel<double>::burgers();
  CHECK(secant_speed(burgers, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(secant_speed(burgers, 2.0, -2.0) == doctest::Approx(0.0));
  for (double u : {-3.0, -0.5, 0.0, 1.25, 7.0}) {
    CHECK(secant_speed(burgers, u, u) == doctest::Approx(u));
  }
  // Below eps_state the midpoint derivative is used.
  CHECK(secant_speed(burgers, 1.0, 1.0 + 1e-13) == doctest::Approx(1.0));
}

TEST_CASE("rankine-hugoniot examples") {
  auto burgers = FluxModel<double>::burgers();
  CHECK(rankine_hugoniot_speed(burgers, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(rankine_hugoniot_speed(burgers, 2.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rankine_hugoniot_speed(burgers, 0.3, 0.3), std::invalid_argument);

  // u^4 between 1 and -1: (1 - 1) / (-1 - 1) evaluated directly.
  auto quartic = FluxModel<double>::quartic();
  const double direct = (std::pow(-1.0, 4) - std::pow(1.0, 4)) / (-1.0 - 1.0);
  CHECK(rankine_hugoniot_speed(quartic, 1.0, -1.0) == doctest::Approx(direct));
  CHECK(direct == 0.0);

  auto exact = FluxModel<Rational>::burgers();
  CHECK(rankine_hugoniot_speed(exact, Rational(2), Rational(0)) == Rational(1));
  CHECK(secant_speed(exact, Rational(1, 3), Rational(1, 3)) == Rational(1, 3));
}

TEST_CASE("secant monotonicity and sandwich on random triples") {
  std::mt19937 gen(20240611);
  for (auto flux : {FluxModel<double>::burgers({-2.0, 2.0}), FluxModel<double>::quartic(),
                    FluxModel<double>::exponential()}) {
    CAPTURE(flux.name());
    std::uniform_real_distribution<double> state(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
      double u = state(gen);
      double v1 = state(gen);
      double v2 = state(gen);
      if (v2 < v1) std::swap(v1, v2);
      const double s1 = secant_speed(flux, u, v1);
      const double s2 = secant_speed(flux, u, v2);
      CHECK(s1 <= s2 + 1e-12 * (1 + std::abs(s2)));
      const double lo = flux.derivative(std::min(u, v1));
      const double hi = flux.derivative(std::max(u, v1));
      CHECK(s1 >= lo - 1e-12 * (1 + std::abs(lo)));
      CHECK(s1 <= hi + 1e-12 * (1 + std::abs(hi)));
      CHECK(secant_speed(flux, u, v1) == doctest::Approx(secant_speed(flux, v1, u)));
    }
  }
}

TEST_CASE("closed-form secants agree with the difference quotient") {
  auto quartic = FluxModel<double>::quartic();
  auto exp_flux = FluxModel<double>::exponential();
  for (double u : {-1.7, -0.2, 0.4}) {
    for (double v : {-1.1, 0.9, 1.8}) {
      CHECK(secant_speed(quartic, u, v) ==
            doctest::Approx((std::pow(v, 4) - std::pow(u, 4)) / (v - u)).epsilon(1e-12));
      CHECK(secant_speed(exp_flux, u, v) ==
            doctest::Approx((std::exp(v) - std::exp(u)) / (v - u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivative consistency by central differences") {
  for (auto flux : {FluxModel<double>::burgers(), FluxModel<double>::quartic(),
                    FluxModel<double>::exponential()}) {
    for (double u = -1.9; u < 1.9; u += 0.37) {
      const double step = 1e-5;
      const double fd = (flux.evaluate(u + step) - flux.evaluate(u - step)) / (2 * step);
      CHECK(fd == doctest::Approx(flux.derivative(u)).epsilon(1e-6));
    }
  }
}

TEST_CASE("flux construction validates declared bounds") {
  using Fn = FluxModel<double>::Fn;
  Fn f = [](const double& u) { return u * u; };
  Fn df = [](const double& u) { return 2 * u; };
  Fn d2f = [](const double&) { return 2.0; };
  CHECK_NOTHROW(FluxModel<double>("custom", f, df, d2f, {-1.0, 1.0}, {2.0, 2.0}));
  CHECK_THROWS_AS(FluxModel<double>("custom", f, df, d2f, {-1.0, 1.0}, {0.5, 1.0}),
                  std::invalid_argument);
  Fn concave = [](const double& u) { return -u * u; };
  Fn dconcave = [](const double& u) { return -2 * u; };
  Fn d2concave = [](const double&) { return -2.0; };
  CHECK_THROWS_AS(
      FluxModel<double>("concave", concave, dconcave, d2concave, {-1.0, 1.0}, {0.0, 1.0}),
      std::invalid_argument);
  // Wrong derivative is caught by the finite-difference probe.
  CHECK_THROWS_AS(FluxModel<double>("bad", f, [](const double& u) { return 3 * u; }, d2f,
                                    {-1.0, 1.0}, {2.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wft::make_flux<double>("cubic", {}), std::invalid_argument);
  CHECK(wft::make_flux<double>("exp", {-1.0, 1.0}).sup_second_derivative() ==
        doctest::Approx(std::exp(1.0)));
  CHECK_THROWS(wft::make_flux<Rational>("exp", {}));
}

TEST_CASE("quartic convexity modulus") {
  CHECK(FluxModel<double>::quartic().convexity_modulus() == 0.0);
  CHECK(FluxModel<double>::quartic({0.5, 2.0}).convexity_modulus() == doctest::Approx(3.0));
  CHECK(FluxModel<double>::quartic().sup_second_derivative() == doctest::Approx(48.0));
}
