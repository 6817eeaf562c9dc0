#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nevlab/determinants.hpp"
#include "nevlab/nevanlinna.hpp"
#include "nevlab/nochka.hpp"
#include "nevlab/projective.hpp"
#include "nevlab/rational.hpp"

namespace nevlab::smt {

using funcalg::Complex;
using funcalg::Expr;

/// Margin-evaluation tolerances. The error term of the inequality is a
/// finite-grid budget: slack_fraction * max(1, T(r)) plus a flat quadrature
/// allowance, and up to exceptional_fraction of the radii may fail (the
/// theory itself excludes a set of finite logarithmic measure).
struct SmtOptions {
  double slack_fraction{0.05};
  double quadrature_budget{0.25};
  double exceptional_fraction{0.10};
  /// Skips the internal auxiliary-grid estimate when provided.
  std::optional<double> hyperorder_estimate;
};

/// Per-radius ledger of one margin inequality
///   lhs(r) = (q - 2N + n - 1) T_f(r)
///   rhs(r) = sum_j N(r, zeros(f,H_j)) - coefficient * N(r, zeros(det))
/// where det is the Casorati (coefficient N/n) or the Wronskian
/// (coefficient (N+1)/(n+1)).
struct SmtReport {
  nevanlinna::RGrid grid;
  double deficiency{0.0};
  double coefficient{0.0};
  double hyperorder_estimate{0.0};
  std::vector<double> tchar;
  /// counting[j][i] = N(radii[i], zeros(f, H_j)).
  std::vector<std::vector<double>> counting;
  std::vector<double> counting_det;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margin;
  std::vector<double> tolerance;
  std::vector<double> exceptional_radii;
  bool pass{false};
};

/// Margin of the difference-determinant inequality with the Nochka-repaired
/// coefficient N/n. Preconditions: certified N-subgeneral position,
/// q > 2N-n+1, linear nondegeneracy over the c-periodic field, and an
/// estimated hyperorder below 1.
SmtReport smt_margin(const projgeom::ProjectiveMap& f,
                     const projgeom::HyperplaneSystem& sys,
                     const nevanlinna::RGrid& grid, const SmtOptions& opts = {});

/// Classical comparison margin with the Wronskian and coefficient
/// (N+1)/(n+1); requires nondegeneracy over the constants.
SmtReport chen_margin(const projgeom::ProjectiveMap& f,
                      const projgeom::HyperplaneSystem& sys,
                      const nevanlinna::RGrid& grid,
                      const SmtOptions& opts = {});

/// Exact coefficients of the two margin assemblies, for side-by-side
/// comparison: N/n dominates (N+1)/(n+1) exactly when N >= n.
Rational casorati_coefficient(int N, int n);
Rational wronskian_coefficient(int N, int n);

struct PointwiseSample {
  Complex z;
  /// Smallest constant over admissible index decompositions for which the
  /// weighted-product inequality holds at z with equality.
  double constant;
};

struct PointwiseBoundReport {
  std::vector<PointwiseSample> samples;
  double sup_constant{0.0};
  /// Samples rejected for sitting too close to a zero of some intersection
  /// or of the Casorati determinant.
  int rejected{0};
};

/// Pointwise engine of the margin proof: at each sample z, searches the
/// decompositions Q = S + R (|S| = q-N-1, R ordered with its first n+1
/// indices of full rank) and reports the minimal constant K_z with
///   |f|^(w~ (q-2N+n-1)) = K_z * prod_{t_j in R} |(f(.+jc), H_{t_j})|^w(t_j)
///       * prod_{j in S} |(f, H_j)|^w(j) / |C(f)|
///       * |C((f,H) over the leading n+1 of R)|
///       / |(f, H_{t_0}) (f(.+c), H_{t_1}) ... (f(.+nc), H_{t_n})|.
/// The battery asserts sup K_z stays bounded.
PointwiseBoundReport pointwise_product_bound(
    const projgeom::ProjectiveMap& f, const projgeom::HyperplaneSystem& sys,
    const nochka::NochkaWeights& weights, std::span<const Complex> samples);

/// Finite-grid defects: plane_defects[j] = 1 - max over the last grid
/// quartile of N_j/T; casorati_defect = min over the same quartile of
/// N_det/T. The relation (N/n) d_C + sum_j d_j <= 2N-n+1 is checked with
/// slack -0.05.
struct DefectReport {
  std::vector<double> plane_defects;
  double casorati_defect{0.0};
  std::optional<double> wronskian_defect;
  double relation_bound{0.0};
  double relation_slack{0.0};
  bool pass{false};
};

DefectReport defects(const projgeom::ProjectiveMap& f,
                     const projgeom::HyperplaneSystem& sys,
                     const nevanlinna::RGrid& grid,
                     const SmtOptions& opts = {});

/// Partition of functions by shift-periodicity of their ratios, with the
/// per-class vanishing sums that a vanishing total forces.
struct PartitionReport {
  std::vector<std::vector<int>> classes;
  /// Pairs whose ratio could not be evaluated at any sample point; treated
  /// as non-periodic and reported.
  std::vector<std::pair<int, int>> inconclusive_pairs;
  /// Largest scaled |sum over class| per class (when the zero sum was
  /// asserted).
  std::vector<double> class_sum_residuals;
  bool sums_checked{false};
  bool sums_pass{false};
  /// Over the field of c-periodic functions each class spans one dimension,
  /// so the projective image lies in a subspace of dimension classes - 1.
  int dimension_bound{0};
};

/// Groups indices i ~ j when g_i/g_j is c-periodic at every sample point
/// (residual |ratio(z+c) - ratio(z)| / (1 + |ratio(z)|) below 1e-6); when
/// assert_zero_sum is set, additionally verifies the per-class sums vanish.
PartitionReport borel_partition(std::span<const Expr> g, Complex c,
                                bool assert_zero_sum = false,
                                std::uint64_t seed = 0x5eedbeef,
                                int sample_count = 64);

/// Dimension bound floor(N/(n+p-N) - N + n) of the image of a mapping
/// omitting n+p hyperplanes in N-subgeneral position (forward-invariant
/// preimages), clamped at 0 because the image is nonempty. Domain:
/// 1 <= n <= N < n+p and p within the admissible range
/// 1 <= p <= floor(N/(N-n+1) + N - n + 1).
int picard_dimension_bound(int n, int p, int N);

/// Exact threshold N/(N-n+1) + N - n; any admissible p above it forces the
/// dimension bound to 0 (the map agrees with its own shift).
Rational uniqueness_threshold(int n, int N);

}  // namespace nevlab::smt
