#include "nevlab/smt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace nevlab::smt {

namespace {

using funcalg::EvalResult;
using nevanlinna::Divisor;
using nevanlinna::GrowthTable;
using nevanlinna::RGrid;

constexpr double kPointwiseExclusionTol = 1e-8;
constexpr double kRatioPeriodicityTol = 1e-6;
constexpr double kClassSumRelTol = 1e-8;

double estimate_hyperorder(const projgeom::ProjectiveMap& f, const RGrid& grid,
                           const SmtOptions& opts) {
  if (opts.hyperorder_estimate) return *opts.hyperorder_estimate;
  // Start low regardless of the user's window: an exponential map overflows
  // doubles near r ~ 700, and the estimate needs two decades below that.
  const double r0 = 2.0;
  const double r1 = std::max(100.0 * r0, grid.radii.back());
  const int count = 12;
  const int K = 256;
  const double base = nevanlinna::tchar_raw(f, 1.0, K);
  std::vector<double> radii, tvals;
  for (int i = 0; i < count; ++i) {
    const double r =
        r0 * std::pow(r1 / r0, static_cast<double>(i) / (count - 1));
    try {
      tvals.push_back(nevanlinna::tchar_raw(f, r, K) - base);
      radii.push_back(r);
    } catch (const QuadratureError&) {
      break;  // growth outran double range; keep the evaluable prefix
    }
  }
  if (radii.size() < 8 || radii.back() < 99.0 * radii.front())
    throw EstimateError(
        "margin: could not estimate the hyperorder on an auxiliary grid "
        "(growth outruns double range too early); pass "
        "SmtOptions::hyperorder_estimate");
  GrowthTable t;
  t.radii = std::move(radii);
  t.tchar = std::move(tvals);
  t.quadrature_points = K;
  return nevanlinna::order_estimates(t).hyperorder;
}

/// Shared refusal logic of the margin pipelines. Returns the hyperorder
/// estimate that cleared the growth condition.
double require_margin_preconditions(const projgeom::ProjectiveMap& f,
                                    const projgeom::HyperplaneSystem& sys,
                                    const RGrid& grid, const SmtOptions& opts,
                                    bool wronskian_route) {
  if (sys.n != f.dimension())
    throw DimensionError("margin: mapping and system dimensions differ");
  if (sys.q() <= 2 * sys.N - sys.n + 1)
    throw Error("margin: requires q(>2N-n+1); got q=" +
                std::to_string(sys.q()) +
                ", 2N-n+1=" + std::to_string(2 * sys.N - sys.n + 1));
  projgeom::PositionCertificate cert = projgeom::check_subgeneral(sys);
  if (!cert.pass)
    throw Error("margin: hyperplanes are not in N-subgeneral position");
  if (!f.entire())
    throw PoleRiskError(
        "margin: counting needs an entire representation (components with "
        "quotient or negative-power nodes cannot be contour-counted)");

  if (wronskian_route) {
    auto nd = determinants::nondegenerate_over_constants(f);
    if (!nd.nondegenerate)
      throw Error(
          "margin: mapping is linearly degenerate over the constants (the "
          "derivative determinant vanishes at every sample point)");
  } else {
    auto nd = determinants::nondegenerate_over_periodic(f);
    if (!nd.nondegenerate)
      throw Error(
          "margin: mapping is linearly degenerate over the c-periodic field "
          "(the shift determinant vanishes at every sample point)");
  }

  const double hyper = estimate_hyperorder(f, grid, opts);
  if (!(hyper < 1.0))
    throw EstimateError(
        "margin: hyperorder estimate " + std::to_string(hyper) +
        " is not below 1; the inequality is out of the theory's range");
  return hyper;
}

struct Assembly {
  std::vector<double> tchar;
  std::vector<std::vector<double>> counting;
  std::vector<double> counting_det;
};

Divisor det_divisor(const projgeom::ProjectiveMap& f, bool use_wronskian,
                    double r_max) {
  determinants::DeterminantExpr det =
      use_wronskian
          ? determinants::wronskian(f.components)
          : determinants::casorati(f.components, f.shift_offset);
  if (!det.expanded)
    throw Error(
        "margin: determinant too large for divisor extraction (components "
        "beyond 6 are evaluated pointwise only)");
  return nevanlinna::localize_zeros(*det.expanded, r_max);
}

Assembly assemble(const projgeom::ProjectiveMap& f,
                  const projgeom::HyperplaneSystem& sys, const RGrid& grid,
                  bool use_wronskian) {
  const double r_max = grid.radii.back();
  const int K = grid.quadrature_points;

  std::vector<Divisor> plane_divisors;
  plane_divisors.reserve(sys.planes.size());
  for (const projgeom::Hyperplane& h : sys.planes) {
    funcalg::Expr ip = projgeom::intersect(f, h);
    if (funcalg::is_identically_zero(ip))
      throw Error("margin: (f,H) vanishes identically for plane " + h.label +
                  "; the mapping lies inside that hyperplane");
    plane_divisors.push_back(nevanlinna::localize_zeros(ip, r_max));
  }
  const Divisor det_div = det_divisor(f, use_wronskian, r_max);

  Assembly a;
  const double base = nevanlinna::tchar_raw(f, 1.0, K);
  a.tchar.reserve(grid.radii.size());
  for (double r : grid.radii)
    a.tchar.push_back(nevanlinna::tchar_raw(f, r, K) - base);
  a.counting.resize(plane_divisors.size());
  for (std::size_t j = 0; j < plane_divisors.size(); ++j) {
    a.counting[j].reserve(grid.radii.size());
    for (double r : grid.radii)
      a.counting[j].push_back(
          nevanlinna::counting_integral(plane_divisors[j], r));
  }
  a.counting_det.reserve(grid.radii.size());
  for (double r : grid.radii)
    a.counting_det.push_back(nevanlinna::counting_integral(det_div, r));
  return a;
}

SmtReport margin_impl(const projgeom::ProjectiveMap& f,
                      const projgeom::HyperplaneSystem& sys, const RGrid& grid,
                      const SmtOptions& opts, bool use_wronskian) {
  SmtReport report;
  report.grid = grid;
  report.hyperorder_estimate =
      require_margin_preconditions(f, sys, grid, opts, use_wronskian);
  report.deficiency = static_cast<double>(sys.q() - 2 * sys.N + sys.n - 1);
  report.coefficient =
      use_wronskian ? to_double(wronskian_coefficient(sys.N, sys.n))
                    : to_double(casorati_coefficient(sys.N, sys.n));

  Assembly a = assemble(f, sys, grid, use_wronskian);
  report.tchar = std::move(a.tchar);
  report.counting = std::move(a.counting);
  report.counting_det = std::move(a.counting_det);

  const std::size_t m = grid.radii.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double t = report.tchar[i];
    double sum_n = 0.0;
    for (const auto& col : report.counting) sum_n += col[i];
    const double lhs = report.deficiency * t;
    const double rhs = sum_n - report.coefficient * report.counting_det[i];
    const double tol = opts.slack_fraction * std::max(1.0, t) +
                       opts.quadrature_budget;
    report.lhs.push_back(lhs);
    report.rhs.push_back(rhs);
    report.margin.push_back(rhs - lhs);
    report.tolerance.push_back(tol);
    if (rhs - lhs < -tol) report.exceptional_radii.push_back(grid.radii[i]);
  }
  const double allowed =
      opts.exceptional_fraction * static_cast<double>(m) + 1e-12;
  report.pass =
      static_cast<double>(report.exceptional_radii.size()) <= allowed;
  return report;
}

}  // namespace

SmtReport smt_margin(const projgeom::ProjectiveMap& f,
                     const projgeom::HyperplaneSystem& sys, const RGrid& grid,
                     const SmtOptions& opts) {
  return margin_impl(f, sys, grid, opts, false);
}

SmtReport chen_margin(const projgeom::ProjectiveMap& f,
                      const projgeom::HyperplaneSystem& sys, const RGrid& grid,
                      const SmtOptions& opts) {
  return margin_impl(f, sys, grid, opts, true);
}

Rational casorati_coefficient(int N, int n) {
  if (n < 1 || N < n) throw Error("casorati_coefficient: need 1 <= n <= N");
  return Rational(N, n);
}

Rational wronskian_coefficient(int N, int n) {
  if (n < 1 || N < n) throw Error("wronskian_coefficient: need 1 <= n <= N");
  return Rational(N + 1, n + 1);
}

PointwiseBoundReport pointwise_product_bound(
    const projgeom::ProjectiveMap& f, const projgeom::HyperplaneSystem& sys,
    const nochka::NochkaWeights& weights, std::span<const Complex> samples) {
  const int q = sys.q();
  const int n = sys.n;
  const int N = sys.N;
  if (sys.n != f.dimension())
    throw DimensionError(
        "pointwise_product_bound: mapping and system dimensions differ");
  if (q <= 2 * N - n + 1)
    throw Error("pointwise_product_bound: requires q(>2N-n+1)");
  if (!projgeom::check_subgeneral(sys).pass)
    throw Error(
        "pointwise_product_bound: hyperplanes are not in N-subgeneral "
        "position");
  nochka::WeightCertificate cert = nochka::verify_weights(sys, weights);
  if (!cert.pass)
    throw Error("pointwise_product_bound: weight system fails verification (" +
                cert.violations.front().description + ")");

  const int deficiency = q - 2 * N + n - 1;
  const Complex c = f.shift_offset;
  const determinants::DeterminantExpr cf =
      determinants::casorati(f.components, c);

  std::vector<double> hnorm(static_cast<std::size_t>(q), 0.0);
  for (int j = 0; j < q; ++j) {
    double s = 0.0;
    for (Complex h : sys.planes[j].coeffs) s += std::norm(h);
    hnorm[j] = std::sqrt(s);
  }
  std::vector<double> wvals(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) wvals[j] = to_double(weights.weights[j]);
  const double wtilde = to_double(weights.constant);

  // Reusable per-subset machinery: rank and intersection determinant of
  // every (n+1)-subset that can lead an ordering.
  std::map<std::vector<int>, determinants::DeterminantExpr> leading_det;
  std::map<std::vector<int>, bool> leading_full_rank;
  for (auto& subset : projgeom::subsets_of_size(q, n + 1)) {
    const bool full = projgeom::rank_of_subset(sys, subset) == n + 1;
    leading_full_rank[subset] = full;
    if (full)
      leading_det.emplace(subset,
                          determinants::casorati_of_intersections(f, sys, subset));
  }

  PointwiseBoundReport report;
  for (Complex z : samples) {
    // Component values along the shift orbit z, z+c, .., z+Nc.
    std::vector<std::vector<Complex>> comps(static_cast<std::size_t>(N + 1));
    std::vector<double> fnorm(static_cast<std::size_t>(N + 1), 0.0);
    bool ok = true;
    for (int k = 0; k <= N && ok; ++k) {
      comps[k].reserve(f.components.size());
      double s = 0.0;
      for (const funcalg::Expr& comp : f.components) {
        EvalResult e = funcalg::eval(comp, z + c * static_cast<double>(k));
        if (!e.is_value()) {
          ok = false;
          break;
        }
        comps[k].push_back(e.value);
        s += std::norm(e.value);
      }
      fnorm[k] = std::sqrt(s);
      if (fnorm[k] < kPointwiseExclusionTol) ok = false;
    }
    if (!ok) {
      ++report.rejected;
      continue;
    }

    // Shifted intersection magnitudes; any near-zero excludes the sample.
    std::vector<std::vector<double>> ipm(
        static_cast<std::size_t>(N + 1),
        std::vector<double>(static_cast<std::size_t>(q), 0.0));
    for (int k = 0; k <= N && ok; ++k) {
      for (int j = 0; j < q; ++j) {
        Complex ip{0.0, 0.0};
        for (std::size_t l = 0; l < comps[k].size(); ++l)
          ip += sys.planes[j].coeffs[l] * comps[k][l];
        ipm[k][j] = std::abs(ip);
        if (ipm[k][j] < kPointwiseExclusionTol * fnorm[k] * hnorm[j]) {
          ok = false;
          break;
        }
      }
    }
    EvalResult cfe = cf.eval_numeric(z);
    std::optional<double> cf_scale = cf.row_norm_scale(z);
    if (!ok || !cfe.is_value() || !cf_scale ||
        std::abs(cfe.value) < kPointwiseExclusionTol * *cf_scale) {
      ++report.rejected;
      continue;
    }

    const double lhs =
        std::pow(fnorm[0], wtilde * static_cast<double>(deficiency));
    double best = std::numeric_limits<double>::infinity();
    bool combinatorial = false;
    for (auto& s_set : projgeom::subsets_of_size(q, q - N - 1)) {
      std::vector<bool> in_s(static_cast<std::size_t>(q), false);
      for (int j : s_set) in_s[j] = true;
      std::vector<int> r_set;
      for (int j = 0; j < q; ++j)
        if (!in_s[j]) r_set.push_back(j);

      double log_b = 0.0;
      for (int j : s_set) log_b += wvals[j] * std::log(ipm[0][j]);

      std::sort(r_set.begin(), r_set.end());
      do {
        std::vector<int> leading(r_set.begin(), r_set.begin() + n + 1);
        std::sort(leading.begin(), leading.end());
        if (!leading_full_rank[leading]) continue;
        combinatorial = true;

        EvalResult led = leading_det.at(leading).eval_numeric(z);
        if (!led.is_value()) continue;
        const double led_mag = std::abs(led.value);
        if (led_mag < 1e-300) continue;

        double log_a = 0.0;
        for (int j = 0; j <= N; ++j)
          log_a += wvals[r_set[j]] * std::log(ipm[j][r_set[j]]);
        double log_d = 0.0;
        for (int j = 0; j <= n; ++j) log_d += std::log(ipm[j][r_set[j]]);

        const double k_z =
            lhs * std::abs(cfe.value) /
            std::exp(log_a + log_b + std::log(led_mag) - log_d);
        if (std::isfinite(k_z)) best = std::min(best, k_z);
      } while (std::next_permutation(r_set.begin(), r_set.end()));
    }
    if (!combinatorial)
      throw Error(
          "pointwise_product_bound: no admissible decomposition exists; the "
          "position certificate is inconsistent");
    if (!std::isfinite(best)) {
      ++report.rejected;
      continue;
    }
    report.samples.push_back({z, best});
    report.sup_constant = std::max(report.sup_constant, best);
  }
  return report;
}

DefectReport defects(const projgeom::ProjectiveMap& f,
                     const projgeom::HyperplaneSystem& sys, const RGrid& grid,
                     const SmtOptions& opts) {
  require_margin_preconditions(f, sys, grid, opts, false);
  Assembly a = assemble(f, sys, grid, false);

  const std::size_t m = grid.radii.size();
  const std::size_t start = (3 * m) / 4;
  if (start >= m) throw Error("defects: grid too small for a top quartile");
  for (std::size_t i = start; i < m; ++i)
    if (a.tchar[i] < 0.1)
      throw EstimateError(
          "defects: characteristic too small on the top grid quartile to "
          "form defect ratios");

  DefectReport report;
  report.relation_bound = static_cast<double>(2 * sys.N - sys.n + 1);
  for (std::size_t j = 0; j < a.counting.size(); ++j) {
    double worst = 0.0;
    for (std::size_t i = start; i < m; ++i)
      worst = std::max(worst, a.counting[j][i] / a.tchar[i]);
    report.plane_defects.push_back(1.0 - worst);
  }
  {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < m; ++i)
      lowest = std::min(lowest, a.counting_det[i] / a.tchar[i]);
    report.casorati_defect = lowest;
  }
  try {
    auto nd = determinants::nondegenerate_over_constants(f);
    if (nd.nondegenerate) {
      const Divisor wdiv = det_divisor(f, true, grid.radii.back());
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t i = start; i < m; ++i)
        lowest = std::min(
            lowest, nevanlinna::counting_integral(wdiv, grid.radii[i]) /
                        a.tchar[i]);
      report.wronskian_defect = lowest;
    }
  } catch (const Error&) {
    // Wronskian route unavailable: the defect stays unreported.
  }

  double sum = 0.0;
  for (double d : report.plane_defects) sum += d;
  const double coeff = to_double(casorati_coefficient(sys.N, sys.n));
  report.relation_slack =
      report.relation_bound - (coeff * report.casorati_defect + sum);

  bool in_range = report.casorati_defect >= -0.02;
  for (double d : report.plane_defects)
    if (d < -0.02 || d > 1.02) in_range = false;
  report.pass = in_range && report.relation_slack >= -0.05;
  return report;
}

PartitionReport borel_partition(std::span<const Expr> g, Complex c,
                                bool assert_zero_sum, std::uint64_t seed,
                                int sample_count) {
  const int q = static_cast<int>(g.size());
  if (q < 1) throw Error("borel_partition: need at least one function");
  for (const Expr& gj : g)
    if (funcalg::is_identically_zero(gj))
      throw Error("borel_partition: a function vanishes identically");

  const std::vector<Complex> zs = funcalg::annulus_samples(sample_count, seed);

  // Evaluate everything once: values at z and at z + c.
  const std::size_t s_count = zs.size();
  std::vector<std::vector<std::optional<Complex>>> at(
      static_cast<std::size_t>(q)),
      at_shift(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    at[j].resize(s_count);
    at_shift[j].resize(s_count);
    for (std::size_t s = 0; s < s_count; ++s) {
      EvalResult e0 = funcalg::eval(g[j], zs[s]);
      EvalResult e1 = funcalg::eval(g[j], zs[s] + c);
      if (e0.is_value()) at[j][s] = e0.value;
      if (e1.is_value()) at_shift[j][s] = e1.value;
    }
  }

  std::vector<int> parent(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) parent[j] = j;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  PartitionReport report;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      int valid = 0;
      double worst = 0.0;
      for (std::size_t s = 0; s < s_count; ++s) {
        if (!at[i][s] || !at[j][s] || !at_shift[i][s] || !at_shift[j][s])
          continue;
        const Complex denom0 = *at[j][s];
        const Complex denom1 = *at_shift[j][s];
        if (std::abs(denom0) < 1e-300 || std::abs(denom1) < 1e-300) continue;
        const Complex ratio0 = *at[i][s] / denom0;
        const Complex ratio1 = *at_shift[i][s] / denom1;
        worst = std::max(worst, std::abs(ratio1 - ratio0) /
                                    (1.0 + std::abs(ratio0)));
        ++valid;
      }
      if (valid == 0) {
        report.inconclusive_pairs.push_back({i, j});
        continue;
      }
      if (worst < kRatioPeriodicityTol) parent[find(i)] = find(j);
    }
  }

  std::map<int, std::vector<int>> grouped;
  for (int j = 0; j < q; ++j) grouped[find(j)].push_back(j);
  for (auto& [root, members] : grouped) report.classes.push_back(members);
  std::sort(report.classes.begin(), report.classes.end());
  report.dimension_bound = static_cast<int>(report.classes.size()) - 1;

  if (assert_zero_sum) {
    report.sums_checked = true;
    report.sums_pass = true;
    for (const std::vector<int>& cls : report.classes) {
      double worst = 0.0;
      int valid = 0;
      for (std::size_t s = 0; s < s_count; ++s) {
        Complex sum{0.0, 0.0};
        double scale = 1.0;
        bool usable = true;
        for (int j = 0; j < q; ++j) {
          if (!at[j][s]) {
            usable = false;
            break;
          }
          scale = std::max(scale, std::abs(*at[j][s]));
        }
        if (!usable) continue;
        for (int j : cls) sum += *at[j][s];
        worst = std::max(worst, std::abs(sum) / scale);
        ++valid;
      }
      if (valid == 0) worst = std::numeric_limits<double>::infinity();
      report.class_sum_residuals.push_back(worst);
      if (!(worst <= kClassSumRelTol)) report.sums_pass = false;
    }
  }
  return report;
}

int picard_dimension_bound(int n, int p, int N) {
  if (n < 1 || N < n)
    throw Error("picard_dimension_bound: need 1 <= n <= N");
  if (p < 1) throw Error("picard_dimension_bound: need p >= 1");
  if (!(N < n + p)) throw Error("picard_dimension_bound: need N < n + p");
  const Rational admissible = Rational(N, N - n + 1) + (N - n + 1);
  if (Rational(p) > admissible)
    throw Error("picard_dimension_bound: p exceeds the admissible range");
  const Rational value = Rational(N, n + p - N) - N + n;
  const long long floored = floor_to_int(value);
  // The image is nonempty, so a negative formal bound still means a point.
  return floored < 0 ? 0 : static_cast<int>(floored);
}

Rational uniqueness_threshold(int n, int N) {
  if (n < 1 || N < n) throw Error("uniqueness_threshold: need 1 <= n <= N");
  return Rational(N, N - n + 1) + (N - n);
}

}  // namespace nevlab::smt
