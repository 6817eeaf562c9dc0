#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "nevlab/expr.hpp"
#include "nevlab/parse.hpp"

using nevlab::funcalg::Complex;
using nevlab::funcalg::Expr;
using nevlab::funcalg::EvalResult;

namespace {

Expr P(const char* s) { return nevlab::funcalg::parse_expr(s); }

double rel_err(Complex got, Complex want) {
  const double scale = std::max(1.0, std::abs(want));
  return std::abs(got - want) / scale;
}

// A small zoo covering every node kind; none has a pole on the sample annulus.
const std::vector<const char*> kZoo = {
    "z",
    "z^3 - 2*z + 1",
    "exp(z)",
    "exp(2*z) + exp(-z)",
    "sin(z)*z",
    "cos(z) - sin(z)^2",
    "(z^2 + 4) / (z^2 + 9)",
    "shift(exp(z), 1)",
    "diff(sin(z)*exp(z))",
};

}  // namespace

TEST_SUITE("funcalg.expr") {

TEST_CASE("eval basics") {
  EvalResult r = nevlab::funcalg::eval(P("z^2 + 1"), Complex{2.0, 0.0});
  REQUIRE(r.is_value());
  CHECK(rel_err(r.value, Complex{5.0, 0.0}) < 1e-15);

  r = nevlab::funcalg::eval(P("exp(z)"), Complex{0.0, M_PI});
  REQUIRE(r.is_value());
  CHECK(rel_err(r.value, Complex{-1.0, 0.0}) < 1e-15);

  r = nevlab::funcalg::eval(P("sin(z)"), Complex{0.5, 0.25});
  REQUIRE(r.is_value());
  CHECK(rel_err(r.value, std::sin(Complex{0.5, 0.25})) < 1e-15);
}

TEST_CASE("pole and indeterminate statuses") {
  CHECK(nevlab::funcalg::eval(P("1/z"), Complex{0.0, 0.0}).is_pole());
  CHECK(nevlab::funcalg::eval(P("z^-2"), Complex{0.0, 0.0}).is_pole());
  // 0/0 is indeterminate, not a pole.
  CHECK(nevlab::funcalg::eval(P("z/z"), Complex{0.0, 0.0}).is_indeterminate());
  // Overflow is flagged as such.
  EvalResult big = nevlab::funcalg::eval(P("exp(z)"), Complex{1e6, 0.0});
  CHECK(big.is_indeterminate());
  CHECK(big.overflow);
}

TEST_CASE("shift is structural substitution") {
  const Expr e = P("exp(z)*z^2");
  const Complex c{0.7, -0.3};
  const Expr sh = nevlab::funcalg::shift(e, c);
  for (Complex z : nevlab::funcalg::annulus_samples(16, 17)) {
    EvalResult a = nevlab::funcalg::eval(sh, z);
    EvalResult b = nevlab::funcalg::eval(e, z + c);
    REQUIRE(a.is_value());
    REQUIRE(b.is_value());
    CHECK(rel_err(a.value, b.value) < 1e-12);
  }
}

TEST_CASE("shift additivity") {
  const Complex a{0.4, 0.9};
  const Complex b{-1.1, 0.2};
  for (const char* src : kZoo) {
    const Expr e = P(src);
    const Expr two_step = nevlab::funcalg::shift(nevlab::funcalg::shift(e, a), b);
    const Expr one_step = nevlab::funcalg::shift(e, a + b);
    for (Complex z : nevlab::funcalg::annulus_samples(8, 23)) {
      EvalResult x = nevlab::funcalg::eval(two_step, z);
      EvalResult y = nevlab::funcalg::eval(one_step, z);
      REQUIRE(x.is_value());
      REQUIRE(y.is_value());
      CHECK(rel_err(x.value, y.value) < 1e-12);
    }
  }
}

TEST_CASE("shift commutes with differentiate") {
  const Complex c{0.5, 0.8};
  for (const char* src : kZoo) {
    const Expr e = P(src);
    const Expr ds = nevlab::funcalg::differentiate(nevlab::funcalg::shift(e, c));
    const Expr sd = nevlab::funcalg::shift(nevlab::funcalg::differentiate(e), c);
    for (Complex z : nevlab::funcalg::annulus_samples(8, 31)) {
      EvalResult x = nevlab::funcalg::eval(ds, z);
      EvalResult y = nevlab::funcalg::eval(sd, z);
      REQUIRE(x.is_value());
      REQUIRE(y.is_value());
      CHECK(rel_err(x.value, y.value) < 1e-10);
    }
  }
}

TEST_CASE("derivative matches central differences") {
  const double h = 1e-6;
  for (const char* src : kZoo) {
    const Expr e = P(src);
    const Expr de = nevlab::funcalg::differentiate(e);
    for (Complex z : nevlab::funcalg::annulus_samples(8, 47)) {
      EvalResult exact = nevlab::funcalg::eval(de, z);
      EvalResult up = nevlab::funcalg::eval(e, z + Complex{h, 0.0});
      EvalResult dn = nevlab::funcalg::eval(e, z - Complex{h, 0.0});
      REQUIRE(exact.is_value());
      REQUIRE(up.is_value());
      REQUIRE(dn.is_value());
      const Complex fd = (up.value - dn.value) / Complex{2.0 * h, 0.0};
      CHECK(rel_err(exact.value, fd) < 1e-6);
    }
  }
}

TEST_CASE("derivative spot values") {
  EvalResult r = nevlab::funcalg::eval(nevlab::funcalg::differentiate(P("z^2")),
                                       Complex{3.0, 0.0});
  REQUIRE(r.is_value());
  CHECK(rel_err(r.value, Complex{6.0, 0.0}) < 1e-15);

  // (sin(z) z)' = z cos z + sin z: value 0 at 0, cos(1)+sin(1) at 1.
  const Expr d = nevlab::funcalg::differentiate(P("sin(z)*z"));
  r = nevlab::funcalg::eval(d, Complex{0.0, 0.0});
  REQUIRE(r.is_value());
  CHECK(std::abs(r.value) < 1e-15);
  r = nevlab::funcalg::eval(d, Complex{1.0, 0.0});
  REQUIRE(r.is_value());
  CHECK(rel_err(r.value, Complex{std::cos(1.0) + std::sin(1.0), 0.0}) < 1e-14);
}

TEST_CASE("identically-zero sampling") {
  CHECK(nevlab::funcalg::is_identically_zero(P("z - z")));
  CHECK(nevlab::funcalg::is_identically_zero(P("sin(z)^2 + cos(z)^2 - 1")));
  CHECK(nevlab::funcalg::is_identically_zero(P("exp(z)*exp(-z) - 1")));
  CHECK_FALSE(nevlab::funcalg::is_identically_zero(P("z")));
  // Small but honest coefficients stay above the zero-test threshold on the
  // annulus 0.5 <= |z| <= 2.
  CHECK_FALSE(nevlab::funcalg::is_identically_zero(P("0.00000001*z")));
}

TEST_CASE("quotient by identical zero is refused") {
  CHECK_THROWS_AS(Expr::quotient(P("1"), P("z - z")), nevlab::Error);
}

TEST_CASE("pole risk flag") {
  CHECK(nevlab::funcalg::has_pole_risk(P("1/z")));
  CHECK(nevlab::funcalg::has_pole_risk(P("z^-1 + 1")));
  CHECK_FALSE(nevlab::funcalg::has_pole_risk(P("exp(z) + z^3")));
}

TEST_CASE("to_string round-trips through the parser") {
  for (const char* src : kZoo) {
    const Expr e = P(src);
    const Expr back = nevlab::funcalg::parse_expr(e.to_string());
    for (Complex z : nevlab::funcalg::annulus_samples(8, 59)) {
      EvalResult x = nevlab::funcalg::eval(e, z);
      EvalResult y = nevlab::funcalg::eval(back, z);
      REQUIRE(x.is_value());
      REQUIRE(y.is_value());
      CHECK(rel_err(x.value, y.value) < 1e-14);
    }
  }
}

TEST_CASE("annulus samples are deterministic and in range") {
  auto a = nevlab::funcalg::annulus_samples(64, 0x5eedbeef);
  auto b = nevlab::funcalg::annulus_samples(64, 0x5eedbeef);
  REQUIRE(a.size() == 64);
  CHECK(a == b);
  for (Complex z : a) {
    CHECK(std::abs(z) >= 0.5);
    CHECK(std::abs(z) <= 2.0);
  }
}

}  // TEST_SUITE
