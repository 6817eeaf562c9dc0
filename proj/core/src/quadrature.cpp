#include "nevlab/quadrature.hpp"

#include <cmath>

namespace nevlab::nevanlinna {

RGrid RGrid::make(double r_min, double r_max, int count, Spacing spacing,
                  int quadrature_points) {
  if (!(r_min > 1.0))
    throw Error("RGrid: radii must exceed the baseline radius 1");
  if (!(r_max > r_min)) throw Error("RGrid: r_max must exceed r_min");
  if (count < 2) throw Error("RGrid: need at least two radii");
  if (quadrature_points < kMinQuadraturePoints)
    throw Error("RGrid: quadrature_points must be at least 64");
  RGrid g;
  g.quadrature_points = quadrature_points;
  g.radii.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / (count - 1);
    double r = spacing == Spacing::kLog
                   ? r_min * std::pow(r_max / r_min, t)
                   : r_min + t * (r_max - r_min);
    g.radii.push_back(r);
  }
  return g;
}

CircleAverage circle_average(const CircleIntegrand& g, double r, int K) {
  if (K < kMinQuadraturePoints)
    throw Error("circle_average: need at least 64 points");
  const double step = 2.0 * M_PI / K;
  const double nudge = 2.0 * M_PI / (7.0 * K);
  double sum = 0.0;
  int nudges = 0;
  for (int k = 0; k < K; ++k) {
    double theta = step * k;
    std::optional<double> v;
    for (int attempt = 0; attempt <= 3; ++attempt) {
      double t = theta + attempt * nudge;
      v = g(Complex{r * std::cos(t), r * std::sin(t)});
      if (v) break;
      ++nudges;
      if (nudges > K / 8)
        throw QuadratureError(
            "circle_average: more than K/8 sample points needed nudging");
    }
    if (!v)
      throw QuadratureError(
          "circle_average: sample point unusable after repeated nudges");
    sum += *v;
  }
  return {sum / K, nudges};
}

CircleIntegrand log_abs_integrand(const Expr& e, double pole_eps) {
  return [e, pole_eps](Complex z) -> std::optional<double> {
    funcalg::EvalResult r = funcalg::eval(e, z, pole_eps);
    if (!r.is_value()) return std::nullopt;
    double m = std::abs(r.value);
    if (m < 1e-300) return std::nullopt;
    return std::log(m);
  };
}

CircleIntegrand log_plus_abs_integrand(const Expr& e, double pole_eps) {
  return [e, pole_eps](Complex z) -> std::optional<double> {
    funcalg::EvalResult r = funcalg::eval(e, z, pole_eps);
    if (!r.is_value()) return std::nullopt;
    double m = std::abs(r.value);
    if (m <= 1.0) return 0.0;
    return std::log(m);
  };
}

}  // namespace nevlab::nevanlinna
