#pragma once

#include <functional>
#include <vector>

#include "nevlab/errors.hpp"
#include "nevlab/expr.hpp"

namespace nevlab::nevanlinna {

using funcalg::Complex;
using funcalg::Expr;

/// Zero divisor inside a disk: locations are pairwise distinct beyond the
/// merge tolerance, multiplicities are positive integers.
struct Divisor {
  struct Point {
    Complex location;
    int multiplicity;
  };
  std::vector<Point> points;

  int total() const {
    int t = 0;
    for (const Point& p : points) t += p.multiplicity;
    return t;
  }
};

struct CountResult {
  int count{0};
  /// Radius actually used; differs from the request when a zero sat on (or
  /// hugged) the circle and the contour was pushed outward by 1e-4 steps.
  double used_radius{0.0};
  int perturbations{0};
};

/// Number of zeros of e (with multiplicity) in |z| <= t, by the argument
/// principle: the winding number of e over the circle, computed by adaptive
/// phase tracking until the total settles within 0.25 of an integer.
///
/// Preconditions: e is holomorphic (no quotient / negative-power nodes,
/// else PoleRiskError points at the Jensen route) and not identically zero.
CountResult count_zeros(const Expr& e, double t);

/// Locates the zeros of e in |z| <= t by recursive rectangle subdivision of
/// winding numbers, polishing each zero with a multiplicity-aware Newton
/// iteration and verifying every multiplicity with a small-circle winding.
/// The localized total is checked against count_zeros.
Divisor localize_zeros(const Expr& e, double t);

/// Integrated counting function with the baseline N(1) = 0:
///   N(r) = sum over |rho| <= 1 of mu * log r
///        + sum over 1 < |rho| <= r of mu * log(r / |rho|).
double counting_integral(const Divisor& d, double r);

/// Convenience form: localizes the divisor of e in |z| <= r first.
double counting_integral(const Expr& e, double r);

namespace detail {

/// Winding number of `value_at` along the closed path `path` : [0,1] -> C.
/// Throws WindingError when a zero on (or extremely near) the path keeps the
/// phase step from resolving.
int winding_number(const std::function<Complex(double)>& path,
                   const Expr& e, int base_samples = 64);

}  // namespace detail

}  // namespace nevlab::nevanlinna
