#include <cmath>
#include <complex>

#include "doctest.h"

#include "helpers.hpp"
#include "nevlab/errors.hpp"
#include "nevlab/parse.hpp"
#include "nevlab/quadrature.hpp"

using nevlab::funcalg::Complex;
using nevlab::Error;
using nevlab::QuadratureError;
using nevlab::funcalg::parse_expr;
using nevlab::nevanlinna::CircleAverage;
using nevlab::nevanlinna::circle_average;
using nevlab::nevanlinna::log_abs_integrand;
using nevlab::nevanlinna::log_plus_abs_integrand;
using nevlab::nevanlinna::RGrid;

TEST_SUITE("quadrature") {
  TEST_CASE("grid construction validates its inputs") {
    CHECK_THROWS_AS(RGrid::make(1.0, 10.0, 4, RGrid::Spacing::kLog, 64),
                    Error);
    CHECK_THROWS_AS(RGrid::make(0.5, 10.0, 4, RGrid::Spacing::kLog, 64),
                    Error);
    CHECK_THROWS_AS(RGrid::make(5.0, 5.0, 4, RGrid::Spacing::kLog, 64),
                    Error);
    CHECK_THROWS_AS(RGrid::make(2.0, 10.0, 1, RGrid::Spacing::kLog, 64),
                    Error);
    CHECK_THROWS_AS(RGrid::make(2.0, 10.0, 4, RGrid::Spacing::kLog, 32),
                    Error);
  }

  TEST_CASE("log spacing has constant ratio, linear constant step") {
    RGrid lg = RGrid::make(2.0, 32.0, 5, RGrid::Spacing::kLog, 128);
    REQUIRE(lg.radii.size() == 5);
    CHECK(lg.quadrature_points == 128);
    CHECK(lg.radii.front() == doctest::Approx(2.0));
    CHECK(lg.radii.back() == doctest::Approx(32.0));
    for (std::size_t i = 1; i < lg.radii.size(); ++i)
      CHECK(lg.radii[i] / lg.radii[i - 1] == doctest::Approx(2.0));

    RGrid ln = RGrid::make(2.0, 10.0, 5, RGrid::Spacing::kLinear, 64);
    for (std::size_t i = 1; i < ln.radii.size(); ++i)
      CHECK(ln.radii[i] - ln.radii[i - 1] == doctest::Approx(2.0));
  }

  TEST_CASE("circle average of a constant is exact") {
    CircleAverage avg = circle_average([](Complex) { return 3.5; }, 2.0, 64);
    CHECK(avg.value == doctest::Approx(3.5));
    CHECK(avg.nudges == 0);
  }

  TEST_CASE("mean of log|z - a| over |z| = r is log max(r, |a|)") {
    // Trapezoid sums converge geometrically here because the nearest
    // singularity sits well off the circle.
    auto mean = [](Complex a, double r) {
      return circle_average(
                 [a](Complex z) -> std::optional<double> {
                   return std::log(std::abs(z - a));
                 },
                 r, 512)
          .value;
    };
    CHECK(mean(Complex{0.5, 0.0}, 2.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(mean(Complex{3.0, 4.0}, 2.0) ==
          doctest::Approx(std::log(5.0)).epsilon(1e-9));
    CHECK(mean(Complex{0.0, 0.0}, 7.0) ==
          doctest::Approx(std::log(7.0)).epsilon(1e-12));
    CHECK(mean(Complex{-1.0, 1.0}, 10.0) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-9));
  }

  TEST_CASE("a single bad point is nudged without changing the mean") {
    const double r = 2.0;
    auto g = [r](Complex z) -> std::optional<double> {
      if (std::abs(z - Complex{r, 0.0}) < 1e-6) return std::nullopt;
      return 1.0;
    };
    CircleAverage avg = circle_average(g, r, 64);
    CHECK(avg.nudges == 1);
    CHECK(avg.value == doctest::Approx(1.0));
  }

  TEST_CASE("persistent failure raises QuadratureError") {
    auto never = [](Complex) -> std::optional<double> { return std::nullopt; };
    CHECK_THROWS_AS(circle_average(never, 2.0, 64), QuadratureError);

    // A fat failing arc exhausts the K/8 nudge budget even though each
    // individual point would eventually escape.
    auto half = [](Complex z) -> std::optional<double> {
      if (z.real() > 0.0) return std::nullopt;
      return 1.0;
    };
    CHECK_THROWS_AS(circle_average(half, 2.0, 64), QuadratureError);
  }

  TEST_CASE("too few sample points is rejected") {
    CHECK_THROWS_AS(circle_average([](Complex) { return 0.0; }, 2.0, 32),
                    Error);
  }

  TEST_CASE("log integrands fail on poles and exact zeros") {
    auto inv = log_abs_integrand(parse_expr("1/z"));
    CHECK(!inv(Complex{0.0, 0.0}).has_value());
    CHECK(*inv(Complex{2.0, 0.0}) == doctest::Approx(-std::log(2.0)));

    auto lin = log_abs_integrand(parse_expr("z-1"));
    CHECK(!lin(Complex{1.0, 0.0}).has_value());

    auto plus = log_plus_abs_integrand(parse_expr("z"));
    CHECK(*plus(Complex{0.5, 0.0}) == 0.0);
    CHECK(*plus(Complex{0.0, 3.0}) == doctest::Approx(std::log(3.0)));
  }

  TEST_CASE("product splits into the sum of the factors' means") {
    auto prod = log_abs_integrand(parse_expr("(z-1/2)*(z-3-4i)"));
    double got = circle_average(prod, 2.0, 512).value;
    CHECK(got == doctest::Approx(std::log(2.0) + std::log(5.0)).epsilon(1e-9));
  }
}
