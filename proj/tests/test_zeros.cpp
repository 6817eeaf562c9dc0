#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "helpers.hpp"
#include "nevlab/errors.hpp"
#include "nevlab/parse.hpp"
#include "nevlab/zeros.hpp"

using nevlab::funcalg::Complex;
using nevlab::PoleRiskError;
using nevlab::funcalg::parse_expr;
using nevlab::nevanlinna::count_zeros;
using nevlab::nevanlinna::counting_integral;
using nevlab::nevanlinna::Divisor;
using nevlab::nevanlinna::localize_zeros;

namespace {

// Smallest distance from any divisor point to the target location.
double nearest(const Divisor& d, Complex target) {
  double best = 1e300;
  for (const auto& p : d.points)
    best = std::min(best, std::abs(p.location - target));
  return best;
}

}  // namespace

TEST_SUITE("zeros") {
  TEST_CASE("polynomial zero counts match their degree inside the disk") {
    CHECK(count_zeros(parse_expr("z^3-1"), 2.0).count == 3);
    CHECK(count_zeros(parse_expr("z^3-1"), 0.5).count == 0);
    CHECK(count_zeros(parse_expr("(z-1)*(z-3)*(z+5)"), 2.0).count == 1);
    CHECK(count_zeros(parse_expr("(z-1)*(z-3)*(z+5)"), 4.0).count == 2);
    CHECK(count_zeros(parse_expr("(z-1)*(z-3)*(z+5)"), 6.0).count == 3);
    CHECK(count_zeros(parse_expr("z^4+16"), 3.0).count == 4);
    CHECK(count_zeros(parse_expr("exp(z)"), 10.0).count == 0);
  }

  TEST_CASE("a zero sitting on the contour pushes the radius outward") {
    auto res = count_zeros(parse_expr("z-2"), 2.0);
    CHECK(res.count == 1);
    CHECK(res.perturbations > 0);
    CHECK(res.used_radius > 2.0);
  }

  TEST_CASE("exp(z)-1 zero counts follow the 2 pi i lattice") {
    // Zeros at 2 pi i k; |2 pi k| <= t gives 2 floor(t / 2pi) + 1 zeros.
    const nevlab::funcalg::Expr e = parse_expr("exp(z)-1");
    CHECK(count_zeros(e, 40.0).count == 13);
    CHECK(count_zeros(e, 50.0).count == 15);
    CHECK(count_zeros(e, 60.0).count == 19);
    CHECK(count_zeros(e, 63.0).count == 21);
  }

  TEST_CASE("localization finds the lattice points with multiplicity one") {
    Divisor d = localize_zeros(parse_expr("exp(z)-1"), 20.0);
    CHECK(d.total() == 7);
    for (int k = -3; k <= 3; ++k) {
      Complex target{0.0, 2.0 * M_PI * k};
      CHECK(nearest(d, target) < 1e-8);
    }
    for (const auto& p : d.points) CHECK(p.multiplicity == 1);
  }

  TEST_CASE("squared factors carry multiplicity two") {
    Divisor d = localize_zeros(parse_expr("(exp(z)-1)^2"), 4.0);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].multiplicity == 2);
    CHECK(std::abs(d.points[0].location) < 1e-8);

    Divisor p = localize_zeros(parse_expr("(z-2)^3*(z+1)"), 3.0);
    CHECK(p.total() == 4);
    std::vector<int> mults;
    for (const auto& pt : p.points) mults.push_back(pt.multiplicity);
    std::sort(mults.begin(), mults.end());
    CHECK(mults == std::vector<int>{1, 3});
  }

  TEST_CASE("quotients are rejected toward the Jensen route") {
    CHECK_THROWS_AS(count_zeros(parse_expr("1/(z-1)"), 2.0), PoleRiskError);
    CHECK_THROWS_AS(localize_zeros(parse_expr("z^-2+1"), 2.0), PoleRiskError);
  }

  TEST_CASE("counting integral matches the closed form for known divisors") {
    // N(r) for a single simple zero at rho: log(r / max(|rho|, 1)).
    Divisor d;
    d.points.push_back({Complex{0.0, 0.0}, 2});
    d.points.push_back({Complex{3.0, 0.0}, 1});
    d.points.push_back({Complex{0.0, -4.0}, 3});
    const double r = 10.0;
    double expect = 2.0 * std::log(r) + std::log(r / 3.0) +
                    3.0 * std::log(r / 4.0);
    CHECK(counting_integral(d, r) == doctest::Approx(expect).epsilon(1e-12));

    // Points beyond r contribute nothing; inside the unit disk they count
    // from the baseline radius 1.
    Divisor far;
    far.points.push_back({Complex{0.5, 0.0}, 1});
    far.points.push_back({Complex{50.0, 0.0}, 4});
    CHECK(counting_integral(far, 10.0) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-12));
  }

  TEST_CASE("expression form agrees with the divisor form") {
    double via_expr = counting_integral(parse_expr("z^3-1"), 5.0);
    CHECK(via_expr == doctest::Approx(3.0 * std::log(5.0)).epsilon(1e-9));

    double fourth = counting_integral(parse_expr("z^4+16"), 8.0);
    CHECK(fourth == doctest::Approx(4.0 * std::log(8.0 / 2.0)).epsilon(1e-9));
  }
}
