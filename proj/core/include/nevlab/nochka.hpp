#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nevlab/projective.hpp"
#include "nevlab/rational.hpp"

namespace nevlab::nochka {

using projgeom::HyperplaneSystem;

/// Weights attached to a hyperplane family in N-subgeneral position:
/// positive rationals omega(j) <= 1 with constant omega_tilde = max omega(j)
/// satisfying, exactly,
///   sum_j omega(j) = omega_tilde (q - 2N + n - 1) + n + 1,
///   (n+1)/(2N-n+1) <= omega_tilde <= n/N,
///   sum_{j in R} omega(j) <= rank(R)   for every R with 0 < |R| <= N+1.
struct NochkaWeights {
  std::vector<Rational> weights;
  Rational constant;
};

struct ConstraintRecord {
  std::string description;
  bool satisfied{false};
  std::optional<std::vector<int>> subset;  // for the rank constraints
};

struct WeightCertificate {
  bool pass{false};
  std::vector<ConstraintRecord> violations;  // empty on pass
};

/// Computes weights for a certified system with q > 2N - n + 1.
///
/// N == n forces the all-ones solution. Otherwise the constraint system is
/// solved exactly: an arbitrary-precision simplex maximizes omega_tilde with
/// the maximum pinned to be attained by some omega(j), then maximizes the
/// minimum weight at that value to certify strict positivity. Ties resolve
/// to the largest feasible omega_tilde. Throws InfeasibleError (naming the
/// tightest violated constraint) if the sweep over pin positions finds no
/// strictly positive solution.
NochkaWeights compute_weights(const HyperplaneSystem& sys);

/// Independent re-check of every defining property, by full enumeration of
/// the <= N+1 subsets. Shares no code with the solver beyond the rank oracle.
WeightCertificate verify_weights(const HyperplaneSystem& sys,
                                 const NochkaWeights& w);

struct ProductSelection {
  std::vector<int> indices;  // ascending, size = rank(R)
  double weighted_log_product;   // sum over R of omega(j) log E_j
  double selected_log_product;   // sum over indices of log E_j
};

/// Given per-plane comparison values E_j >= 1 and a subset R with
/// 0 < |R| <= N+1, finds distinct indices j_1..j_{rank(R)} whose subset has
/// the same rank as R and whose plain product dominates the weighted product
/// over R. Exhaustive search over rank-preserving index sets, choosing the
/// one with the largest product.
ProductSelection select_product_indices(const HyperplaneSystem& sys,
                                        const NochkaWeights& w,
                                        std::span<const double> E,
                                        std::span<const int> R);

}  // namespace nevlab::nochka
