#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"

#include "helpers.hpp"
#include "nevlab/errors.hpp"
#include "nevlab/nochka.hpp"
#include "nevlab/parse.hpp"
#include "nevlab/smt.hpp"

using nevlab::funcalg::Complex;
using nevlab::DimensionError;
using nevlab::Error;
using nevlab::EstimateError;
using nevlab::PoleRiskError;
using nevlab::Rational;
using nevlab::funcalg::annulus_samples;
using nevlab::funcalg::Expr;
using nevlab::funcalg::parse_expr;
using nevlab::nevanlinna::RGrid;
using namespace nevlab::smt;
using nevlab::projgeom::HyperplaneSystem;
using nevlab::projgeom::ProjectiveMap;

namespace {

ProjectiveMap exp_line() { return testutil::make_map({"1", "exp(z)"}); }

HyperplaneSystem q3_system() {
  return testutil::make_system({{1.0, 0.0}, {0.0, 1.0}, {1.0, -1.0}}, 1, 1);
}

}  // namespace

TEST_SUITE("smt") {
  TEST_CASE("route coefficients are exact rationals with the known order") {
    CHECK(casorati_coefficient(2, 1) == Rational(2));
    CHECK(casorati_coefficient(3, 2) == Rational(3, 2));
    CHECK(wronskian_coefficient(3, 2) == Rational(4, 3));
    for (int n = 1; n <= 6; ++n)
      for (int N = n; N <= 6; ++N) {
        CHECK(casorati_coefficient(N, n) >= wronskian_coefficient(N, n));
        if (N == n) {
          CHECK(casorati_coefficient(N, n) == Rational(1));
          CHECK(wronskian_coefficient(N, n) == Rational(1));
        }
      }
    CHECK_THROWS_AS(casorati_coefficient(1, 2), Error);
    CHECK_THROWS_AS(wronskian_coefficient(0, 0), Error);
  }

  TEST_CASE("hand-assembled exponential case settles near zero margin") {
    RGrid grid = RGrid::make(8.0, 60.0, 8, RGrid::Spacing::kLog, 256);
    SmtReport rep = smt_margin(exp_line(), q3_system(), grid);
    CHECK(rep.pass);
    CHECK(rep.exceptional_radii.empty());
    CHECK(rep.deficiency == 1.0);
    CHECK(rep.coefficient == 1.0);
    REQUIRE(rep.margin.size() == 8);
    for (std::size_t i = 0; i < rep.margin.size(); ++i) {
      CHECK(std::abs(rep.margin[i]) <= rep.tolerance[i]);
      CHECK(rep.margin[i] ==
            doctest::Approx(rep.rhs[i] - rep.lhs[i]).epsilon(1e-12));
      CHECK(rep.lhs[i] ==
            doctest::Approx(rep.deficiency * rep.tchar[i]).epsilon(1e-12));
    }
    REQUIRE(rep.counting.size() == 3);

    SmtReport chen = chen_margin(exp_line(), q3_system(), grid);
    CHECK(chen.pass);
    CHECK(chen.coefficient == 1.0);
  }

  TEST_CASE("margin preconditions refuse bad pairings") {
    RGrid grid = RGrid::make(4.0, 40.0, 8, RGrid::Spacing::kLog, 64);

    // Mapping into P^1 against a system of planes in P^2.
    auto sys2 = testutil::make_system(
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0},
         {1.0, 1.0, 1.0}, {1.0, 2.0, 4.0}, {1.0, 3.0, 9.0}}, 2, 2);
    CHECK_THROWS_AS(smt_margin(exp_line(), sys2, grid), DimensionError);

    // Too few hyperplanes for the deficiency to be positive.
    auto thin = testutil::make_system({{1.0, 0.0}, {0.0, 1.0}}, 1, 1);
    CHECK_THROWS_AS(smt_margin(exp_line(), thin, grid), Error);

    // Non-entire representation cannot be contour-counted.
    ProjectiveMap quot = testutil::make_map({"1", "1/(z-20)"});
    CHECK_THROWS_AS(smt_margin(quot, q3_system(), grid), PoleRiskError);

    // Degenerate mapping: second component is a constant multiple.
    ProjectiveMap degen = testutil::make_map({"exp(z)", "exp(z)*2"});
    CHECK_THROWS_AS(smt_margin(degen, q3_system(), grid), Error);
  }

  TEST_CASE("pointwise product bound stays finite on the exponential case") {
    ProjectiveMap f = exp_line();
    HyperplaneSystem sys = q3_system();
    auto w = nevlab::nochka::compute_weights(sys);
    std::vector<Complex> samples;
    for (Complex z : annulus_samples(24, 41)) samples.push_back(z * 3.0);
    PointwiseBoundReport rep = pointwise_product_bound(f, sys, w, samples);
    CHECK(!rep.samples.empty());
    CHECK(rep.samples.size() + static_cast<std::size_t>(rep.rejected) ==
          samples.size());
    CHECK(rep.sup_constant > 0.0);
    CHECK(rep.sup_constant <= 1e6);
    for (const auto& s : rep.samples) {
      CHECK(std::isfinite(s.constant));
      CHECK(s.constant > 0.0);
    }
  }

  TEST_CASE("pointwise product bound rejects unverifiable weights") {
    HyperplaneSystem sys = q3_system();
    auto w = nevlab::nochka::compute_weights(sys);
    w.weights[0] = Rational(7);
    std::vector<Complex> pts = {Complex{2.0, 0.0}};
    CHECK_THROWS_AS(pointwise_product_bound(exp_line(), sys, w, pts), Error);
  }

  TEST_CASE("defect relation holds on the exponential three-plane case") {
    RGrid grid = RGrid::make(12.0, 150.0, 12, RGrid::Spacing::kLog, 256);
    DefectReport rep = defects(exp_line(), q3_system(), grid);
    CHECK(rep.pass);
    REQUIRE(rep.plane_defects.size() == 3);
    // (f, H1) = 1 and (f, H2) = e^z never vanish: full defect. H3 picks up
    // the lattice of e^z = 1 and deflects to zero.
    CHECK(rep.plane_defects[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.plane_defects[1] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(rep.plane_defects[2]) < 0.05);
    CHECK(rep.casorati_defect >= -0.02);
    CHECK(rep.relation_bound == doctest::Approx(2.0));
    double lhs = rep.casorati_defect;
    for (double d : rep.plane_defects) lhs += d;
    CHECK(lhs <= rep.relation_bound + 0.05);
    CHECK(rep.relation_slack ==
          doctest::Approx(rep.relation_bound - lhs).epsilon(1e-9));
    REQUIRE(rep.wronskian_defect.has_value());
    CHECK(*rep.wronskian_defect >= -0.02);
  }

  TEST_CASE("defects refuse a grid whose growth stays under the floor") {
    RGrid grid = RGrid::make(1.02, 1.08, 8, RGrid::Spacing::kLinear, 64);
    ProjectiveMap slow = testutil::make_map({"1", "z"});
    CHECK_THROWS_AS(defects(slow, q3_system(), grid), EstimateError);
  }

  TEST_CASE("exponential sums split into their proportionality classes") {
    std::vector<Expr> g = {parse_expr("exp(z)"), parse_expr("exp(z)*(0+2i)"),
                           parse_expr("exp(2*z)"), parse_expr("exp(2*z)*7"),
                           parse_expr("5")};
    PartitionReport rep = borel_partition(g, Complex{1.0, 0.0});
    REQUIRE(rep.classes.size() == 3);
    CHECK(rep.classes[0] == std::vector<int>{0, 1});
    CHECK(rep.classes[1] == std::vector<int>{2, 3});
    CHECK(rep.classes[2] == std::vector<int>{4});
    CHECK(rep.inconclusive_pairs.empty());
    CHECK(rep.dimension_bound == 2);
    CHECK(!rep.sums_checked);
  }

  TEST_CASE("zero-sum assertion verifies per-class cancellation") {
    std::vector<Expr> g = {parse_expr("exp(z)"), parse_expr("exp(z)*(0-1i)"),
                           parse_expr("exp(z)*(0-1+1i)"), parse_expr("sin(z)"),
                           parse_expr("sin(z)*(0-1)")};
    PartitionReport rep = borel_partition(g, Complex{1.0, 0.0}, true);
    REQUIRE(rep.classes.size() == 2);
    CHECK(rep.sums_checked);
    CHECK(rep.sums_pass);
    REQUIRE(rep.class_sum_residuals.size() == 2);
    for (double res : rep.class_sum_residuals) CHECK(res < 1e-8);

    // Perturb one coefficient: the class no longer cancels.
    g[2] = parse_expr("exp(z)*(0-1+1.001i)");
    PartitionReport bad = borel_partition(g, Complex{1.0, 0.0}, true);
    CHECK(!bad.sums_pass);
  }

  TEST_CASE("dimension bound is floor(n/p) in general position") {
    for (int n = 1; n <= 10; ++n)
      for (int p = 1; p <= n + 1; ++p)
        CHECK(picard_dimension_bound(n, p, n) == n / p);
  }

  TEST_CASE("dimension bound is positive exactly up to the threshold") {
    for (int n = 1; n <= 6; ++n)
      for (int N = n; N <= 6; ++N) {
        const Rational admissible = Rational(N, N - n + 1) + (N - n + 1);
        for (int p = 1; p <= 12; ++p) {
          if (N >= n + p || Rational(p) > admissible) {
            CHECK_THROWS_AS(picard_dimension_bound(n, p, N), Error);
            continue;
          }
          const bool positive = picard_dimension_bound(n, p, N) >= 1;
          CHECK(positive == (Rational(p) <= uniqueness_threshold(n, N)));
        }
      }
    CHECK(uniqueness_threshold(2, 3) == Rational(5, 2));
    CHECK_THROWS_AS(uniqueness_threshold(3, 2), Error);
  }
}
