#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "nevlab/expr.hpp"
#include "nevlab/parse.hpp"
#include "nevlab/projective.hpp"

using namespace nevlab;
using funcalg::Complex;
using funcalg::Expr;
using testutil::make_map;
using testutil::make_system;

namespace {

Expr P(const char* s) { return funcalg::parse_expr(s); }

}  // namespace

TEST_SUITE("projgeom") {

TEST_CASE("hyperplane construction") {
  projgeom::Hyperplane h({Complex{1.0, 0.0}, Complex{0.0, -2.0}}, "H");
  CHECK(h.ambient_dimension() == 1);
  CHECK(h.label == "H");
  CHECK_THROWS_AS(projgeom::Hyperplane({Complex{0.0, 0.0}, Complex{0.0, 0.0}}),
                  Error);
}

TEST_CASE("projective map construction guards") {
  CHECK_THROWS_AS(projgeom::ProjectiveMap({P("z")}, Complex{1.0, 0.0}),
                  DimensionError);
  CHECK_THROWS_AS(projgeom::ProjectiveMap({P("0"), P("z - z")}, Complex{1.0, 0.0}),
                  Error);
  // Components that dip below the zero threshold together at sampled points
  // are rejected as an unreduced representation.
  CHECK_THROWS_AS(projgeom::ProjectiveMap({P("z^8/1000000000"),
                                           P("z^8/500000000")},
                                          Complex{1.0, 0.0}),
                  Error);
}

TEST_CASE("entire flag tracks pole risk") {
  CHECK(make_map({"1", "exp(z)"}).entire());
  CHECK_FALSE(make_map({"1", "(z^2+4)/(z^2+9)"}).entire());
}

TEST_CASE("dimension") {
  CHECK(make_map({"1", "exp(z)"}).dimension() == 1);
  CHECK(make_map({"1", "z", "z^2"}).dimension() == 2);
}

TEST_CASE("intersect is the coefficient pairing") {
  auto f = make_map({"1", "exp(z)"});
  projgeom::Hyperplane h({Complex{2.0, 0.0}, Complex{-1.0, 0.0}}, "");
  Expr e = projgeom::intersect(f, h);
  for (Complex z : funcalg::annulus_samples(8, 7)) {
    auto got = funcalg::eval(e, z);
    REQUIRE(got.is_value());
    const Complex want = Complex{2.0, 0.0} - std::exp(z);
    CHECK(std::abs(got.value - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("intersect is linear in the hyperplane") {
  auto f = make_map({"1", "z", "z^2"});
  const Complex alpha{2.0, 1.0};
  const Complex beta{-0.5, 0.25};
  std::vector<Complex> c1 = {Complex{1, 0}, Complex{0, 0}, Complex{2, 0}};
  std::vector<Complex> c2 = {Complex{0, 0}, Complex{1, 0}, Complex{-1, 0}};
  std::vector<Complex> mix(3);
  for (int k = 0; k < 3; ++k) mix[k] = alpha * c1[k] + beta * c2[k];
  projgeom::Hyperplane h1(c1, ""), h2(c2, ""), hm(mix, "");
  Expr e1 = projgeom::intersect(f, h1);
  Expr e2 = projgeom::intersect(f, h2);
  Expr em = projgeom::intersect(f, hm);
  for (Complex z : funcalg::annulus_samples(16, 11)) {
    auto v1 = funcalg::eval(e1, z);
    auto v2 = funcalg::eval(e2, z);
    auto vm = funcalg::eval(em, z);
    REQUIRE(v1.is_value());
    REQUIRE(v2.is_value());
    REQUIRE(vm.is_value());
    const Complex want = alpha * v1.value + beta * v2.value;
    CHECK(std::abs(vm.value - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("rank of subsets") {
  auto sys = make_system(
      {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 2, 4}}, 2, 2);
  CHECK(projgeom::rank_of_subset(sys, std::vector<int>{}) == 0);
  CHECK(projgeom::rank_of_subset(sys, std::vector<int>{0}) == 1);
  CHECK(projgeom::rank_of_subset(sys, std::vector<int>{0, 1, 2}) == 2);
  CHECK(projgeom::rank_of_subset(sys, std::vector<int>{0, 1, 3}) == 3);
  CHECK(projgeom::rank_of_subset(sys, std::vector<int>{0, 1, 2, 3, 4}) == 3);
}

TEST_CASE("system shape validation") {
  CHECK_THROWS_AS(make_system({{1, 0}, {0, 1}}, 2, 1), DimensionError);
  CHECK_THROWS_AS(make_system({{1, 0}, {0, 1}, {1, 1}}, 1, 2), DimensionError);
  CHECK_THROWS_AS(make_system({{1, 0}, {0, 1, 1}, {1, 1}}, 1, 1),
                  DimensionError);
}

TEST_CASE("general position on the moment curve") {
  // Rows (1, t, t^2) for distinct t: any three are a Vandermonde matrix.
  auto sys = make_system({{1, 0, 0}, {1, 1, 1}, {1, 2, 4}, {1, 3, 9}}, 2, 2);
  auto cert = projgeom::check_subgeneral(sys);
  CHECK(cert.pass);
  CHECK(cert.verified_subsets.size() == 4);
  CHECK_FALSE(cert.witness.has_value());
}

TEST_CASE("concurrent triple fails general position but passes N=3") {
  std::vector<std::vector<double>> rows = {
      {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  auto bad = make_system(rows, 2, 2);
  auto cert = projgeom::check_subgeneral(bad);
  CHECK_FALSE(cert.pass);
  REQUIRE(cert.witness.has_value());
  CHECK(*cert.witness == std::vector<int>{0, 1, 2});
  CHECK(cert.witness_rank == 2);

  auto ok = make_system(rows, 3, 2);
  CHECK(projgeom::check_subgeneral(ok).pass);
}

TEST_CASE("subgeneral position bounds subset rank from below") {
  // rk(R) >= |R| - (N - n) for every R with |R| <= N+1 once the position
  // certificate passes.
  auto check = [](const projgeom::HyperplaneSystem& sys) {
    REQUIRE(projgeom::check_subgeneral(sys).pass);
    for (int k = 1; k <= sys.N + 1; ++k)
      for (const auto& R : projgeom::subsets_of_size(sys.q(), k)) {
        const int rk = projgeom::rank_of_subset(sys, R);
        CHECK(rk >= static_cast<int>(R.size()) - (sys.N - sys.n));
      }
  };
  check(make_system({{1, 0}, {0, 1}, {1, -1}, {1, 1}, {2, 1}}, 2, 1));
  check(make_system(
      {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}}, 3,
      2));
}

TEST_CASE("subset enumeration is lexicographic and complete") {
  auto s = projgeom::subsets_of_size(4, 2);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == std::vector<int>{0, 1});
  CHECK(s[1] == std::vector<int>{0, 2});
  CHECK(s.back() == std::vector<int>{2, 3});
  CHECK(projgeom::subsets_of_size(3, 3).size() == 1);
  CHECK(projgeom::subsets_of_size(3, 0).size() == 1);
}

}  // TEST_SUITE
