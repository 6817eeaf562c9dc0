#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nevlab/errors.hpp"
#include "nevlab/expr.hpp"

namespace nevlab::projgeom {

using funcalg::Complex;
using funcalg::Expr;

/// Relative singular-value threshold of the numeric rank.
inline constexpr double kRankRelTol = 1e-9;

/// A hyperplane sum(h_k w_k) = 0 in P^n, given by its nonzero coefficient
/// vector of length n+1.
struct Hyperplane {
  std::vector<Complex> coeffs;
  std::string label;

  Hyperplane(std::vector<Complex> c, std::string l = "");
  int ambient_dimension() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// A mapping into P^n held as n+1 component expressions plus the difference
/// offset it will be studied against. Construction verifies that at least one
/// component is not identically zero and that the components share no zero
/// among the sampled evaluation points (a reduced-representation proxy).
struct ProjectiveMap {
  std::vector<Expr> components;
  Complex shift_offset;

  ProjectiveMap(std::vector<Expr> comps, Complex offset,
                std::uint64_t seed = 0x5eedbeef);

  int dimension() const { return static_cast<int>(components.size()) - 1; }

  /// True when no component tree carries quotient/negative-power nodes, i.e.
  /// the representation is safe for contour counting.
  bool entire() const;
};

/// A family of q hyperplanes to be studied in N-subgeneral position.
/// Construction validates shapes (q >= N+1 >= n+1, coefficient lengths);
/// the position property itself is certified by check_subgeneral.
struct HyperplaneSystem {
  std::vector<Hyperplane> planes;
  int N;
  int n;

  HyperplaneSystem(std::vector<Hyperplane> ps, int N_, int n_);
  int q() const { return static_cast<int>(planes.size()); }
};

/// (f, H) = sum h_k f_k as an expression (constant-folded linear combination).
Expr intersect(const ProjectiveMap& f, const Hyperplane& H);

/// Numeric rank of the coefficient rows indexed by `subset` (indices into
/// sys.planes), via SVD with threshold 1e-9 relative to the largest singular
/// value. rank({}) = 0.
int rank_of_subset(const HyperplaneSystem& sys, std::span<const int> subset);

struct PositionCertificate {
  bool pass{false};
  /// On pass: every (N+1)-subset that was verified to have rank n+1.
  std::vector<std::vector<int>> verified_subsets;
  /// On failure: one (N+1)-subset of rank < n+1 and its rank.
  std::optional<std::vector<int>> witness;
  int witness_rank{-1};
};

/// Certifies N-subgeneral position by exhausting all (N+1)-subsets.
PositionCertificate check_subgeneral(const HyperplaneSystem& sys);

/// All k-subsets of {0,..,q-1} in lexicographic order (test/enumeration
/// helper shared by the weight machinery).
std::vector<std::vector<int>> subsets_of_size(int q, int k);

}  // namespace nevlab::projgeom
