#include "nevlab/determinants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nevlab/errors.hpp"

namespace nevlab::determinants {

namespace {

using funcalg::EvalStatus;

/// Cofactor expansion along the first row, built from the smart
/// constructors so constant subdeterminants fold on the way up.
Expr expand(const std::vector<std::vector<Expr>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  Expr acc = Expr::constant(0.0);
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<Expr>> minor;
    minor.reserve(n - 1);
    for (int r = 1; r < n; ++r) {
      std::vector<Expr> row;
      row.reserve(n - 1);
      for (int c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Expr term = Expr::product(m[0][j], expand(minor));
    acc = (j % 2 == 0) ? Expr::sum(acc, term) : Expr::difference(acc, term);
  }
  return acc;
}

std::optional<Expr> maybe_expand(const std::vector<std::vector<Expr>>& m) {
  if (static_cast<int>(m.size()) > kMaxExpandedSize) return std::nullopt;
  return expand(m);
}

void check_square(const std::vector<std::vector<Expr>>& m) {
  if (m.empty()) throw DimensionError("determinant: empty matrix");
  for (const auto& row : m)
    if (row.size() != m.size())
      throw DimensionError("determinant: matrix is not square");
}

}  // namespace

EvalResult DeterminantExpr::eval_numeric(Complex z, double pole_eps) const {
  const int n = size();
  Eigen::MatrixXcd vals(n, n);
  bool pole = false;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      EvalResult e = funcalg::eval(matrix[r][c], z, pole_eps);
      if (e.is_indeterminate()) return e;
      if (e.is_pole()) {
        pole = true;
        continue;
      }
      vals(r, c) = e.value;
    }
  }
  if (pole) return {EvalStatus::kPole, Complex{}, false};
  Complex det = vals.determinant();
  if (!std::isfinite(det.real()) || !std::isfinite(det.imag()))
    return {EvalStatus::kIndeterminate, Complex{}, true};
  return {EvalStatus::kValue, det, false};
}

EvalResult DeterminantExpr::eval(Complex z, double pole_eps) const {
  if (expanded) return funcalg::eval(*expanded, z, pole_eps);
  return eval_numeric(z, pole_eps);
}

std::optional<double> DeterminantExpr::row_norm_scale(Complex z,
                                                      double pole_eps) const {
  double scale = 0.0;
  for (const auto& row : matrix) {
    double sq = 0.0;
    for (const Expr& entry : row) {
      EvalResult e = funcalg::eval(entry, z, pole_eps);
      if (!e.is_value()) return std::nullopt;
      sq += std::norm(e.value);
    }
    scale = std::max(scale, std::sqrt(sq));
  }
  return scale;
}

DeterminantExpr casorati(std::span<const Expr> components, Complex c) {
  if (components.empty())
    throw DimensionError("casorati: need at least one component");
  const int n = static_cast<int>(components.size());
  DeterminantExpr d;
  d.kind = DetKind::kCasorati;
  d.offset = c;
  d.matrix.reserve(n);
  for (int k = 0; k < n; ++k) {
    std::vector<Expr> row;
    row.reserve(n);
    for (int j = 0; j < n; ++j)
      row.push_back(k == 0 ? components[j]
                           : funcalg::shift(components[j],
                                            c * static_cast<double>(k)));
    d.matrix.push_back(std::move(row));
  }
  check_square(d.matrix);
  d.expanded = maybe_expand(d.matrix);
  return d;
}

DeterminantExpr casorati_of_intersections(const projgeom::ProjectiveMap& f,
                                          const projgeom::HyperplaneSystem& sys,
                                          std::span<const int> R) {
  if (static_cast<int>(R.size()) != sys.n + 1)
    throw DimensionError(
        "casorati_of_intersections: subset must pick exactly n+1 planes");
  std::vector<int> idx(R.begin(), R.end());
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw Error("casorati_of_intersections: repeated plane index");
  std::vector<Expr> comps;
  comps.reserve(idx.size());
  for (int j : idx) {
    if (j < 0 || j >= sys.q())
      throw Error("casorati_of_intersections: plane index out of range");
    comps.push_back(projgeom::intersect(f, sys.planes[j]));
  }
  return casorati(comps, f.shift_offset);
}

DeterminantExpr wronskian(std::span<const Expr> components) {
  if (components.empty())
    throw DimensionError("wronskian: need at least one component");
  const int n = static_cast<int>(components.size());
  DeterminantExpr d;
  d.kind = DetKind::kWronskian;
  d.matrix.reserve(n);
  std::vector<Expr> row(components.begin(), components.end());
  for (int k = 0; k < n; ++k) {
    d.matrix.push_back(row);
    if (k + 1 < n)
      for (Expr& entry : row) entry = funcalg::differentiate(entry);
  }
  check_square(d.matrix);
  d.expanded = maybe_expand(d.matrix);
  return d;
}

namespace {

NondegeneracyResult sample_verdict(const DeterminantExpr& det,
                                   std::uint64_t seed, int sample_count,
                                   const char* what) {
  NondegeneracyResult out;
  int valid = 0;
  for (Complex z : funcalg::annulus_samples(sample_count, seed)) {
    EvalResult e = det.eval_numeric(z);
    std::optional<double> scale = det.row_norm_scale(z);
    if (!e.is_value() || !scale) {
      ++out.skipped;
      continue;
    }
    ++valid;
    double ratio =
        *scale > 0.0 ? std::abs(e.value) / *scale : 0.0;
    if (ratio >= out.best_ratio) {
      out.best_ratio = ratio;
      out.witness = z;
    }
  }
  if (valid == 0)
    throw Error(std::string(what) +
                ": every sample point failed to evaluate; verdict "
                "inconclusive, supply a representation without poles on the "
                "sampling annulus");
  out.nondegenerate = out.best_ratio >= kDegeneracyRelTol;
  return out;
}

}  // namespace

NondegeneracyResult nondegenerate_over_periodic(
    const projgeom::ProjectiveMap& f, std::uint64_t seed, int sample_count) {
  DeterminantExpr det = casorati(f.components, f.shift_offset);
  return sample_verdict(det, seed, sample_count, "nondegenerate_over_periodic");
}

NondegeneracyResult nondegenerate_over_constants(
    const projgeom::ProjectiveMap& f, std::uint64_t seed, int sample_count) {
  DeterminantExpr det = wronskian(f.components);
  return sample_verdict(det, seed, sample_count,
                        "nondegenerate_over_constants");
}

double matrix_transform_check(const projgeom::ProjectiveMap& f,
                              const std::vector<std::vector<Complex>>& B,
                              std::uint64_t seed, int sample_count) {
  const int n = f.dimension() + 1;
  if (static_cast<int>(B.size()) != n)
    throw DimensionError("matrix_transform_check: B must be (n+1)x(n+1)");
  Eigen::MatrixXcd mb(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(B[r].size()) != n)
      throw DimensionError("matrix_transform_check: B must be (n+1)x(n+1)");
    for (int c = 0; c < n; ++c) mb(r, c) = B[r][c];
  }
  const Complex det_b = mb.determinant();
  if (std::abs(det_b) < funcalg::kZeroTestEps)
    throw Error("matrix_transform_check: B is singular");

  std::vector<Expr> g;
  g.reserve(n);
  for (int j = 0; j < n; ++j) {
    Expr col = Expr::constant(0.0);
    for (int k = 0; k < n; ++k)
      col = Expr::sum(col,
                      Expr::product(Expr::constant(B[k][j]), f.components[k]));
    g.push_back(col);
  }

  DeterminantExpr cf = casorati(f.components, f.shift_offset);
  DeterminantExpr cg = casorati(g, f.shift_offset);

  double worst = 0.0;
  int valid = 0;
  for (Complex z : funcalg::annulus_samples(sample_count, seed)) {
    EvalResult ef = cf.eval_numeric(z);
    EvalResult eg = cg.eval_numeric(z);
    if (!ef.is_value() || !eg.is_value()) continue;
    ++valid;
    const Complex expect = ef.value * det_b;
    double scale =
        std::max({1.0, std::abs(expect), std::abs(eg.value)});
    worst = std::max(worst, std::abs(eg.value - expect) / scale);
  }
  if (valid == 0)
    throw Error(
        "matrix_transform_check: every sample point failed to evaluate");
  return worst;
}

}  // namespace nevlab::determinants
