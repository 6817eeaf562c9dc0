#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nevlab/expr.hpp"
#include "nevlab/projective.hpp"

namespace nevlab::determinants {

using funcalg::Complex;
using funcalg::EvalResult;
using funcalg::Expr;

/// Determinants whose symbolic cofactor expansion is precomputed. Larger
/// matrices evaluate numerically per point; counting functions need the
/// expansion, so desk-scale batteries stay at or below this size.
inline constexpr int kMaxExpandedSize = 6;

/// Relative threshold deciding "vanishes at this sample" against the matrix
/// row-norm scale.
inline constexpr double kDegeneracyRelTol = 1e-9;

enum class DetKind { kCasorati, kWronskian };

/// A shift (Casorati) or derivative (Wronskian) determinant. Row k holds the
/// k-fold shifted, respectively k-th derivative, images of the component row;
/// `expanded` is the cofactor expansion when the size permits.
struct DeterminantExpr {
  std::vector<std::vector<Expr>> matrix;
  std::optional<Expr> expanded;
  DetKind kind{DetKind::kCasorati};
  Complex offset{0.0, 0.0};

  int size() const { return static_cast<int>(matrix.size()); }

  /// Determinant value by pivoted elimination of the evaluated entries.
  /// Any indeterminate entry makes the result indeterminate; otherwise any
  /// pole entry makes it a pole.
  EvalResult eval_numeric(Complex z, double pole_eps = funcalg::kPoleEps) const;

  /// Evaluates `expanded` when present, falling back to eval_numeric.
  EvalResult eval(Complex z, double pole_eps = funcalg::kPoleEps) const;

  /// Largest Euclidean row norm of the evaluated matrix; nullopt when some
  /// entry fails to evaluate to a finite value.
  std::optional<double> row_norm_scale(
      Complex z, double pole_eps = funcalg::kPoleEps) const;
};

/// C(f_0,..,f_n) with row k the k c-fold shift of the components.
DeterminantExpr casorati(std::span<const Expr> components, Complex c);

/// C(((f,H_j), j in R)) with R listed in increasing index order; R must pick
/// exactly n+1 planes of the system.
DeterminantExpr casorati_of_intersections(const projgeom::ProjectiveMap& f,
                                          const projgeom::HyperplaneSystem& sys,
                                          std::span<const int> R);

/// W(f_0,..,f_n) with row k the k-th derivative of the components.
DeterminantExpr wronskian(std::span<const Expr> components);

struct NondegeneracyResult {
  bool nondegenerate{false};
  /// Sample point where |C| relative to the row-norm scale was largest.
  Complex witness{0.0, 0.0};
  /// That largest relative magnitude; below kDegeneracyRelTol everywhere
  /// means degenerate.
  double best_ratio{0.0};
  /// Annulus samples rejected because the matrix failed to evaluate there.
  int skipped{0};
};

/// Samples the Casorati determinant of f (at its own shift offset) over the
/// annulus; degenerate when every valid sample vanishes relative to the
/// row-norm scale. Throws when no sample evaluates at all.
NondegeneracyResult nondegenerate_over_periodic(
    const projgeom::ProjectiveMap& f, std::uint64_t seed = 0x5eedbeef,
    int sample_count = 64);

/// Same sampling verdict for the Wronskian, i.e. nondegeneracy over the
/// constants.
NondegeneracyResult nondegenerate_over_constants(
    const projgeom::ProjectiveMap& f, std::uint64_t seed = 0x5eedbeef,
    int sample_count = 64);

/// Checks C(fB) = C(f) det(B) by sampling: returns the largest scaled
/// deviation over the annulus. B acts on the right, g_j = sum_k f_k B(k,j);
/// B must be square of matching size and nonsingular.
double matrix_transform_check(const projgeom::ProjectiveMap& f,
                              const std::vector<std::vector<Complex>>& B,
                              std::uint64_t seed = 0x5eedbeef,
                              int sample_count = 64);

}  // namespace nevlab::determinants
