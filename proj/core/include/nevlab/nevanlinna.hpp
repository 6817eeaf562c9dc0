#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nevlab/projective.hpp"
#include "nevlab/quadrature.hpp"
#include "nevlab/zeros.hpp"

namespace nevlab::nevanlinna {

/// Quadrature depth used by the closed-form identity battery.
inline constexpr int kJensenQuadraturePoints = 1024;

/// RMS threshold under which the affine fit of log+ T against log r is
/// accepted as evidence of finite order, pinning the hyperorder estimate
/// to zero.
inline constexpr double kFiniteOrderFitTol = 0.01;

/// Circle average of log max_j |f_j| at radius r, no baseline subtraction.
double tchar_raw(const projgeom::ProjectiveMap& f, double r, int K);

/// Characteristic function T_f(r) = tchar_raw(r) - tchar_raw(1), fixing the
/// additive normalization to T_f(1) = 0. Requires r > 1.
double tchar(const projgeom::ProjectiveMap& f, double r, int K = 512);

/// Circle average of log+ (|f| |H| / |(f,H)|) at radius r (Euclidean norms),
/// no baseline subtraction. Nonnegative by construction.
double proximity_raw(const projgeom::ProjectiveMap& f,
                     const projgeom::Hyperplane& H, double r, int K);

/// Proximity function m_{f,H}(r), baseline-subtracted at r = 1; may dip
/// slightly below zero. Requires r > 1 and (f,H) not identically zero.
double proximity(const projgeom::ProjectiveMap& f,
                 const projgeom::Hyperplane& H, double r, int K = 512);

/// |N(r, zeros(num)) - N(r, zeros(den)) - (avg_r log|num/den| - avg_1)|.
/// The closed-form battery holds this below 1e-3 at K = 1024.
double jensen_residual(const funcalg::Expr& num, const funcalg::Expr& den,
                       double r, int K = kJensenQuadraturePoints);

/// Per-radius growth record of one experiment. `tchar` always rides along;
/// further series (proximities, counting functions, margins) are named
/// columns of the same length as `radii`.
struct GrowthTable {
  struct Meta {
    int n{0};
    int N{0};
    int q{0};
    funcalg::Complex c{0.0, 0.0};
  };

  Meta meta;
  std::vector<double> radii;
  int quadrature_points{0};
  std::vector<double> tchar;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;

  /// Appends a named series; length must match radii and every entry must
  /// be finite.
  void add_column(std::string name, std::vector<double> vals);

  /// Series by name, nullptr when absent.
  const std::vector<double>* column(std::string_view name) const;
};

/// T_f over the grid (no extra columns).
GrowthTable tchar_table(const projgeom::ProjectiveMap& f, const RGrid& grid);

struct OrderEstimates {
  /// Slope of the affine fit of log+ T against log r over the top half of
  /// the grid.
  double order{0.0};
  double order_residual{0.0};
  /// Hyperorder estimate: zero when the affine fit already explains the
  /// data (finite order), otherwise the slope of log+ log+ T.
  double hyperorder{0.0};
  double hyperorder_residual{0.0};
  /// The log+ log+ slope itself, reported on both routes.
  double hyperorder_raw_slope{0.0};
  bool finite_order_fit{false};
};

/// Finite-grid order/hyperorder estimates from the top half of the table.
/// Requires >= 8 radii spanning >= 2 decades and T > 0 on the fitted half.
OrderEstimates order_estimates(const GrowthTable& table);

/// First-main-theorem ledger for one (mapping, plane) pair: the residual
/// T - N - m should oscillate within a grid-level budget, never escape.
struct FmtReport {
  struct Row {
    double r;
    double tchar;
    double counting;
    double proximity;
    double residual;
  };
  std::vector<Row> rows;
  double oscillation{0.0};
  double budget{0.0};
  bool pass{false};
};

FmtReport fmt_check(const projgeom::ProjectiveMap& f,
                    const projgeom::Hyperplane& H, const RGrid& grid);

/// Explicit constant K(alpha, delta, c) of the logarithmic-difference
/// bound: 4|c|^delta (4 alpha + alpha delta + delta) /
/// (delta (1-delta) (alpha-1)). Requires 0 < delta < 1 and alpha > 1.
double logdiff_constant(double alpha, double delta, funcalg::Complex c);

/// Circle average of log+ |g(z+c)/g(z)| at radius r (no baseline term).
double logdiff_proximity(const funcalg::Expr& g, funcalg::Complex c, double r,
                         int K = 512);

/// K(alpha, delta, c) / r^delta * (T(alpha (r + |c|)) + log_plus_inv_g0),
/// where T is a caller-supplied characteristic oracle for g and
/// log_plus_inv_g0 = log+ (1 / |g(0)|) of the normalized representative.
double logdiff_bound(const std::function<double(double)>& tchar_oracle,
                     funcalg::Complex c, double r, double alpha, double delta,
                     double log_plus_inv_g0 = 0.0);

/// log+ (1/|g(0)|); throws when g has a zero or pole at the origin with a
/// message directing the caller to normalize_at_origin.
double log_plus_inverse_at_origin(const funcalg::Expr& g);

struct Recentered {
  funcalg::Expr g;
  funcalg::Complex offset;
};

/// Returns g unchanged when g(0) is finite and nonzero; otherwise recenters
/// the variable at the regular point of smallest modulus found on a spiral
/// search grid, reporting the offset used.
Recentered normalize_at_origin(const funcalg::Expr& g);

/// One-variable restriction of an m-variable mapping along a unit direction
/// xi; nullopt marks a degenerate slice (skipped and counted).
using SliceFamily = std::function<std::optional<projgeom::ProjectiveMap>(
    std::span<const funcalg::Complex>)>;

struct SliceEstimate {
  double value{0.0};
  double std_error{0.0};
  int directions_used{0};
  int skipped{0};
};

/// Monte Carlo estimate of the m-variable characteristic at radius r as the
/// average of one-variable characteristics over Haar-random unit directions
/// of C^m. Requires m >= 2 and directions >= 16.
SliceEstimate slice_tchar(const SliceFamily& family, int m, double r,
                          int directions, std::uint64_t seed = 0x5eedbeef,
                          int K = 128);

}  // namespace nevlab::nevanlinna
