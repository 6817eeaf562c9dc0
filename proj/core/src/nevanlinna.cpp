#include "nevlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nevlab::nevanlinna {

namespace {

using funcalg::Complex;
using funcalg::EvalResult;
using funcalg::Expr;

constexpr double kTinyMagnitude = 1e-300;

std::optional<std::vector<Complex>> eval_components(
    const projgeom::ProjectiveMap& f, Complex z) {
  std::vector<Complex> vals;
  vals.reserve(f.components.size());
  for (const Expr& comp : f.components) {
    EvalResult e = funcalg::eval(comp, z);
    if (!e.is_value()) return std::nullopt;
    vals.push_back(e.value);
  }
  return vals;
}

CircleIntegrand log_max_norm_integrand(const projgeom::ProjectiveMap& f) {
  return [&f](Complex z) -> std::optional<double> {
    auto vals = eval_components(f, z);
    if (!vals) return std::nullopt;
    double m = 0.0;
    for (Complex v : *vals) m = std::max(m, std::abs(v));
    // Exponentially small values are fine (their log is); only an exact
    // common zero of all components makes the sample unusable.
    if (m == 0.0) return std::nullopt;
    return std::log(m);
  };
}

CircleIntegrand proximity_integrand(const projgeom::ProjectiveMap& f,
                                    const projgeom::Hyperplane& H) {
  double hnorm_sq = 0.0;
  for (Complex h : H.coeffs) hnorm_sq += std::norm(h);
  const double hnorm = std::sqrt(hnorm_sq);
  return [&f, &H, hnorm](Complex z) -> std::optional<double> {
    auto vals = eval_components(f, z);
    if (!vals) return std::nullopt;
    double fnorm_sq = 0.0;
    Complex ip{0.0, 0.0};
    for (std::size_t k = 0; k < vals->size(); ++k) {
      fnorm_sq += std::norm((*vals)[k]);
      ip += H.coeffs[k] * (*vals)[k];
    }
    const double scale = std::sqrt(fnorm_sq) * hnorm;
    if (!std::isfinite(scale) || scale < kTinyMagnitude) return std::nullopt;
    const double mag = std::abs(ip);
    // The integrand has a log singularity exactly at the zeros of (f, H);
    // everywhere else even denormal magnitudes give a finite value. The log
    // difference avoids overflowing the quotient.
    if (mag == 0.0) return std::nullopt;
    return std::max(0.0, std::log(scale) - std::log(mag));
  };
}

struct Fit {
  double slope{0.0};
  double intercept{0.0};
  double rms_residual{0.0};
};

Fit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  Fit fit;
  if (std::abs(denom) < 1e-30) {
    fit.intercept = sy / n;
  } else {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += d * d;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

double log_plus(double v) { return v > 1.0 ? std::log(v) : 0.0; }

}  // namespace

double tchar_raw(const projgeom::ProjectiveMap& f, double r, int K) {
  if (r <= 0.0) throw Error("tchar_raw: radius must be positive");
  return circle_average(log_max_norm_integrand(f), r, K).value;
}

double tchar(const projgeom::ProjectiveMap& f, double r, int K) {
  if (r <= 1.0) throw Error("tchar: radius must exceed the baseline r = 1");
  return tchar_raw(f, r, K) - tchar_raw(f, 1.0, K);
}

double proximity_raw(const projgeom::ProjectiveMap& f,
                     const projgeom::Hyperplane& H, double r, int K) {
  if (r <= 0.0) throw Error("proximity_raw: radius must be positive");
  if (H.ambient_dimension() != f.dimension())
    throw DimensionError("proximity: plane and mapping dimensions differ");
  return circle_average(proximity_integrand(f, H), r, K).value;
}

double proximity(const projgeom::ProjectiveMap& f,
                 const projgeom::Hyperplane& H, double r, int K) {
  if (r <= 1.0)
    throw Error("proximity: radius must exceed the baseline r = 1");
  if (funcalg::is_identically_zero(projgeom::intersect(f, H)))
    throw Error("proximity: (f,H) vanishes identically");
  return proximity_raw(f, H, r, K) - proximity_raw(f, H, 1.0, K);
}

double jensen_residual(const Expr& num, const Expr& den, double r, int K) {
  if (funcalg::is_identically_zero(num) || funcalg::is_identically_zero(den))
    throw Error("jensen_residual: numerator and denominator must not vanish "
                "identically");
  const double lhs = counting_integral(num, r) - counting_integral(den, r);
  auto integrand = [&num, &den](Complex z) -> std::optional<double> {
    EvalResult en = funcalg::eval(num, z);
    EvalResult ed = funcalg::eval(den, z);
    if (!en.is_value() || !ed.is_value()) return std::nullopt;
    const double an = std::abs(en.value);
    const double ad = std::abs(ed.value);
    if (an == 0.0 || ad == 0.0) return std::nullopt;
    return std::log(an) - std::log(ad);
  };
  const double rhs =
      circle_average(integrand, r, K).value - circle_average(integrand, 1.0, K).value;
  return std::abs(lhs - rhs);
}

void GrowthTable::add_column(std::string name, std::vector<double> vals) {
  if (vals.size() != radii.size())
    throw DimensionError("GrowthTable: column length must match the grid");
  for (double v : vals)
    if (!std::isfinite(v))
      throw Error("GrowthTable: non-finite value in column " + name);
  columns.push_back(std::move(name));
  values.push_back(std::move(vals));
}

const std::vector<double>* GrowthTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return &values[k];
  return nullptr;
}

GrowthTable tchar_table(const projgeom::ProjectiveMap& f, const RGrid& grid) {
  GrowthTable t;
  t.meta.n = f.dimension();
  t.meta.c = f.shift_offset;
  t.radii = grid.radii;
  t.quadrature_points = grid.quadrature_points;
  const double base = tchar_raw(f, 1.0, grid.quadrature_points);
  t.tchar.reserve(grid.radii.size());
  for (double r : grid.radii)
    t.tchar.push_back(tchar_raw(f, r, grid.quadrature_points) - base);
  return t;
}

OrderEstimates order_estimates(const GrowthTable& table) {
  const std::size_t m = table.radii.size();
  if (m < 8) throw EstimateError("order_estimates: need at least 8 radii");
  if (table.radii.back() < 100.0 * table.radii.front() * 0.999)
    throw EstimateError("order_estimates: grid must span at least 2 decades");
  if (table.tchar.size() != m)
    throw DimensionError("order_estimates: tchar column length mismatch");

  const std::size_t start = m / 2;
  std::vector<double> x, y1, y2;
  for (std::size_t i = start; i < m; ++i) {
    const double t = table.tchar[i];
    if (t <= 0.0)
      throw EstimateError(
          "order_estimates: characteristic is not positive on the top half "
          "of the grid");
    x.push_back(std::log(table.radii[i]));
    y1.push_back(log_plus(t));
    y2.push_back(log_plus(log_plus(t)));
  }

  const Fit order_fit = least_squares(x, y1);
  const Fit hyper_fit = least_squares(x, y2);

  OrderEstimates est;
  est.order = order_fit.slope;
  est.order_residual = order_fit.rms_residual;
  est.hyperorder_raw_slope = hyper_fit.slope;

  double range = 0.0;
  if (!y1.empty())
    range = *std::max_element(y1.begin(), y1.end()) -
            *std::min_element(y1.begin(), y1.end());
  const double accept = std::max(kFiniteOrderFitTol, 0.02 * range);
  if (order_fit.rms_residual <= accept) {
    est.finite_order_fit = true;
    est.hyperorder = 0.0;
    est.hyperorder_residual = order_fit.rms_residual;
  } else {
    est.hyperorder = hyper_fit.slope;
    est.hyperorder_residual = hyper_fit.rms_residual;
  }
  return est;
}

FmtReport fmt_check(const projgeom::ProjectiveMap& f,
                    const projgeom::Hyperplane& H, const RGrid& grid) {
  if (grid.radii.empty()) throw Error("fmt_check: empty grid");
  const Expr ip = projgeom::intersect(f, H);
  if (funcalg::is_identically_zero(ip))
    throw Error("fmt_check: (f,H) vanishes identically");
  const Divisor div = localize_zeros(ip, grid.radii.back());

  const int K = grid.quadrature_points;
  const double t_base = tchar_raw(f, 1.0, K);
  const double m_base = proximity_raw(f, H, 1.0, K);

  FmtReport report;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double r : grid.radii) {
    FmtReport::Row row;
    row.r = r;
    row.tchar = tchar_raw(f, r, K) - t_base;
    row.counting = counting_integral(div, r);
    row.proximity = proximity_raw(f, H, r, K) - m_base;
    row.residual = row.tchar - row.counting - row.proximity;
    if (first || row.residual < lo) lo = row.residual;
    if (first || row.residual > hi) hi = row.residual;
    first = false;
    report.rows.push_back(row);
  }
  report.oscillation = hi - lo;
  report.budget = 0.05 * std::max(1.0, report.rows.back().tchar);
  report.pass = report.oscillation <= report.budget;
  return report;
}

double logdiff_constant(double alpha, double delta, Complex c) {
  if (!(delta > 0.0 && delta < 1.0))
    throw Error("logdiff_constant: delta must lie in (0,1)");
  if (!(alpha > 1.0)) throw Error("logdiff_constant: alpha must exceed 1");
  const double mag = std::abs(c);
  return 4.0 * std::pow(mag, delta) *
         (4.0 * alpha + alpha * delta + delta) /
         (delta * (1.0 - delta) * (alpha - 1.0));
}

double logdiff_proximity(const Expr& g, Complex c, double r, int K) {
  if (funcalg::is_identically_zero(g))
    throw Error("logdiff_proximity: function vanishes identically");
  const Expr shifted = funcalg::shift(g, c);
  auto integrand = [&g, &shifted](Complex z) -> std::optional<double> {
    EvalResult eg = funcalg::eval(g, z);
    EvalResult es = funcalg::eval(shifted, z);
    if (!eg.is_value() || !es.is_value()) return std::nullopt;
    const double ag = std::abs(eg.value);
    const double as = std::abs(es.value);
    if (ag == 0.0 || as == 0.0) return std::nullopt;
    return std::max(0.0, std::log(as) - std::log(ag));
  };
  return circle_average(integrand, r, K).value;
}

double logdiff_bound(const std::function<double(double)>& tchar_oracle,
                     Complex c, double r, double alpha, double delta,
                     double log_plus_inv_g0) {
  if (r <= 0.0) throw Error("logdiff_bound: radius must be positive");
  const double k = logdiff_constant(alpha, delta, c);
  const double tval = tchar_oracle(alpha * (r + std::abs(c)));
  return k / std::pow(r, delta) * (tval + log_plus_inv_g0);
}

double log_plus_inverse_at_origin(const Expr& g) {
  EvalResult e = funcalg::eval(g, Complex{0.0, 0.0});
  if (!e.is_value() || std::abs(e.value) < funcalg::kPoleEps)
    throw Error(
        "log_plus_inverse_at_origin: function has a zero or pole at the "
        "origin; recenter the variable with normalize_at_origin first");
  return std::max(0.0, -std::log(std::abs(e.value)));
}

Recentered normalize_at_origin(const Expr& g) {
  auto regular = [&g](Complex z0) {
    EvalResult e = funcalg::eval(g, z0);
    return e.is_value() && std::abs(e.value) >= funcalg::kPoleEps;
  };
  if (regular(Complex{0.0, 0.0})) return {g, Complex{0.0, 0.0}};

  // Spiral outward with a golden-angle sweep; the first hit has the
  // smallest modulus among inspected points.
  const double golden = 2.399963229728653;
  for (int step = 1; step <= 200; ++step) {
    const double rho = 0.01 * static_cast<double>(step);
    const double theta = golden * static_cast<double>(step);
    const Complex z0{rho * std::cos(theta), rho * std::sin(theta)};
    if (regular(z0)) return {funcalg::shift(g, z0), z0};
  }
  throw Error(
      "normalize_at_origin: no regular point found near the origin; the "
      "function may vanish identically");
}

SliceEstimate slice_tchar(const SliceFamily& family, int m, double r,
                          int directions, std::uint64_t seed, int K) {
  if (m < 2)
    throw Error("slice_tchar: the slice estimator applies to m >= 2");
  if (directions < 16) throw Error("slice_tchar: need at least 16 directions");
  if (r <= 1.0) throw Error("slice_tchar: radius must exceed 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SliceEstimate est;
  double sum = 0.0, sum_sq = 0.0;
  for (int d = 0; d < directions; ++d) {
    std::vector<Complex> xi(static_cast<std::size_t>(m));
    double norm_sq = 0.0;
    for (Complex& x : xi) {
      x = Complex{gauss(rng), gauss(rng)};
      norm_sq += std::norm(x);
    }
    if (norm_sq < 1e-12) {
      ++est.skipped;
      continue;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (Complex& x : xi) x *= inv;

    std::optional<projgeom::ProjectiveMap> slice = family(xi);
    if (!slice) {
      ++est.skipped;
      continue;
    }
    const double t = tchar(*slice, r, K);
    sum += t;
    sum_sq += t * t;
    ++est.directions_used;
  }
  if (est.directions_used == 0)
    throw EstimateError("slice_tchar: every direction produced a degenerate "
                        "slice");
  const double n = static_cast<double>(est.directions_used);
  est.value = sum / n;
  if (est.directions_used > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.value * est.value) /
                                         (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace nevlab::nevanlinna
