#pragma once

#include <string>
#include <vector>

#include "nevlab/parse.hpp"
#include "nevlab/projective.hpp"

namespace testutil {

using nevlab::funcalg::Complex;
using nevlab::funcalg::Expr;

inline nevlab::projgeom::ProjectiveMap make_map(
    const std::vector<std::string>& components, Complex c = Complex{1.0, 0.0}) {
  std::vector<Expr> exprs;
  exprs.reserve(components.size());
  for (const std::string& s : components)
    exprs.push_back(nevlab::funcalg::parse_expr(s));
  return nevlab::projgeom::ProjectiveMap(std::move(exprs), c);
}

inline nevlab::projgeom::HyperplaneSystem make_system(
    const std::vector<std::vector<double>>& rows, int N, int n) {
  std::vector<nevlab::projgeom::Hyperplane> planes;
  planes.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<Complex> coeffs;
    coeffs.reserve(rows[j].size());
    for (double x : rows[j]) coeffs.push_back(Complex{x, 0.0});
    planes.emplace_back(std::move(coeffs), "H" + std::to_string(j + 1));
  }
  return nevlab::projgeom::HyperplaneSystem(std::move(planes), N, n);
}

}  // namespace testutil
