#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nevlab/errors.hpp"
#include "nevlab/expr.hpp"

namespace nevlab::nevanlinna {

using funcalg::Complex;
using funcalg::Expr;

/// Minimum number of sample points accepted for a circle average.
inline constexpr int kMinQuadraturePoints = 64;

/// Radius grid for growth tables. All radii exceed 1 (the baseline radius)
/// and are strictly increasing.
struct RGrid {
  std::vector<double> radii;
  int quadrature_points{512};

  enum class Spacing { kLinear, kLog };

  static RGrid make(double r_min, double r_max, int count, Spacing spacing,
                    int quadrature_points);
};

/// Real-valued integrand on a circle. Returning nullopt means the point is
/// unusable (a pole or zero was hit) and triggers the nudge protocol.
using CircleIntegrand = std::function<std::optional<double>(Complex)>;

struct CircleAverage {
  double value{0.0};
  int nudges{0};
};

/// Trapezoidal mean of g over |z| = r with K equispaced angles. A point on
/// which g fails is rotated by 2*pi/(7K) (up to three consecutive nudges,
/// each logged); when the total nudge count exceeds K/8 the average is
/// declared unreliable and a QuadratureError is thrown.
CircleAverage circle_average(const CircleIntegrand& g, double r, int K);

/// log|e(z)|; fails on poles, indeterminate points, and zeros hit exactly.
CircleIntegrand log_abs_integrand(const Expr& e, double pole_eps = funcalg::kPoleEps);

/// log^+ |e(z)| = max(0, log|e(z)|).
CircleIntegrand log_plus_abs_integrand(const Expr& e,
                                       double pole_eps = funcalg::kPoleEps);

}  // namespace nevlab::nevanlinna
