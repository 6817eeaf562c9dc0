#include "nevlab/projective.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

namespace nevlab::projgeom {

Hyperplane::Hyperplane(std::vector<Complex> c, std::string l)
    : coeffs(std::move(c)), label(std::move(l)) {
  if (coeffs.empty()) throw DimensionError("Hyperplane: empty coefficients");
  double norm = 0.0;
  for (Complex v : coeffs) norm += std::norm(v);
  if (norm == 0.0) throw Error("Hyperplane: zero coefficient vector");
}

ProjectiveMap::ProjectiveMap(std::vector<Expr> comps, Complex offset,
                             std::uint64_t seed)
    : components(std::move(comps)), shift_offset(offset) {
  if (components.size() < 2)
    throw DimensionError("ProjectiveMap: need at least two components");
  bool some_nonzero = false;
  for (const Expr& c : components)
    if (!funcalg::is_identically_zero(c, seed)) some_nonzero = true;
  if (!some_nonzero)
    throw Error("ProjectiveMap: all components vanish identically");

  // Reduced-representation proxy: no common zero among the sample battery.
  for (Complex z : funcalg::annulus_samples(64, seed ^ 0x9e3779b97f4a7c15ULL)) {
    double best = 0.0;
    bool any_valid = false;
    for (const Expr& c : components) {
      funcalg::EvalResult r = funcalg::eval(c, z);
      if (!r.is_value()) continue;
      any_valid = true;
      best = std::max(best, std::abs(r.value));
    }
    if (any_valid && best < funcalg::kZeroTestEps)
      throw Error(
          "ProjectiveMap: components share a zero at a sampled point; supply "
          "a reduced representation");
  }
}

bool ProjectiveMap::entire() const {
  for (const Expr& c : components)
    if (funcalg::has_pole_risk(c)) return false;
  return true;
}

HyperplaneSystem::HyperplaneSystem(std::vector<Hyperplane> ps, int N_, int n_)
    : planes(std::move(ps)), N(N_), n(n_) {
  if (n < 1) throw DimensionError("HyperplaneSystem: need n >= 1");
  if (N < n) throw DimensionError("HyperplaneSystem: need N >= n");
  if (q() < N + 1)
    throw DimensionError("HyperplaneSystem: need q >= N+1 hyperplanes");
  for (const Hyperplane& h : planes)
    if (h.ambient_dimension() != n)
      throw DimensionError("HyperplaneSystem: coefficient length != n+1");
}

Expr intersect(const ProjectiveMap& f, const Hyperplane& H) {
  if (H.ambient_dimension() != f.dimension())
    throw DimensionError("intersect: hyperplane and mapping dimensions differ");
  Expr acc = Expr::constant({0.0, 0.0});
  for (std::size_t k = 0; k < H.coeffs.size(); ++k)
    acc = acc + Expr::constant(H.coeffs[k]) * f.components[k];
  return acc;
}

int rank_of_subset(const HyperplaneSystem& sys, std::span<const int> subset) {
  if (subset.empty()) return 0;
  Eigen::MatrixXcd m(subset.size(), sys.n + 1);
  for (std::size_t r = 0; r < subset.size(); ++r) {
    int idx = subset[r];
    if (idx < 0 || idx >= sys.q())
      throw DimensionError("rank_of_subset: index out of range");
    for (int c = 0; c <= sys.n; ++c)
      m(static_cast<Eigen::Index>(r), c) = sys.planes[idx].coeffs[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankRelTol * sv(0)) ++rank;
  return rank;
}

std::vector<std::vector<int>> subsets_of_size(int q, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > q) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == q - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

PositionCertificate check_subgeneral(const HyperplaneSystem& sys) {
  PositionCertificate cert;
  for (auto& subset : subsets_of_size(sys.q(), sys.N + 1)) {
    int r = rank_of_subset(sys, subset);
    if (r < sys.n + 1) {
      cert.pass = false;
      cert.witness = subset;
      cert.witness_rank = r;
      cert.verified_subsets.clear();
      return cert;
    }
    cert.verified_subsets.push_back(subset);
  }
  cert.pass = true;
  return cert;
}

}  // namespace nevlab::projgeom
