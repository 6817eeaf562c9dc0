#pragma once

// Shared generators for the randomized weight battery. The unit suite runs a
// slice for fast feedback; the acceptance binary runs the whole batch.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nevlab/projective.hpp"

namespace testutil {

inline nevlab::projgeom::HyperplaneSystem system_from_rows(
    const std::vector<std::vector<double>>& rows, int N, int n) {
  std::vector<nevlab::projgeom::Hyperplane> planes;
  planes.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<nevlab::projgeom::Complex> coeffs(rows[j].begin(), rows[j].end());
    planes.push_back(nevlab::projgeom::Hyperplane{
        std::move(coeffs), "H" + std::to_string(j + 1)});
  }
  return nevlab::projgeom::HyperplaneSystem{std::move(planes), N, n};
}

// Row on the moment curve (1, t, t^2, ..., t^n): any n+1 rows with distinct
// parameters form a Vandermonde matrix, so distinct parameters give general
// position.
inline std::vector<double> moment_row(double t, int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  double p = 1.0;
  for (int k = 0; k <= n; ++k) {
    row[static_cast<std::size_t>(k)] = p;
    p *= t;
  }
  return row;
}

inline std::vector<double> distinct_parameters(std::mt19937_64& rng, int count) {
  std::vector<double> pool;
  for (int v = -6; v <= 6; ++v) pool.push_back(static_cast<double>(v));
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

// Closed-form pairs (numerator, denominator) for the Jensen identity. Every
// zero and pole keeps a comfortable distance from the circles |z| in
// {1, 2, 5, 10, 20}, so the quadrature converges fast.
inline std::vector<std::pair<std::string, std::string>> jensen_battery() {
  return {
      {"(z-3/2)*(z+33/10)", "1"},
      {"z^2*(z-2/5)", "1"},
      {"z^3+27/8", "1"},
      {"z^2+16", "1"},
      {"(exp(z)-1)^2", "1"},
      {"exp(z)-2", "1"},
      {"(z-3/2)*(z+3/2)", "z^2+16"},
      {"1", "z^3"},
      {"sin(z)", "1"},
      {"exp(2*z)-3", "1"},
      {"(z^2+9/4)*exp(z)", "1"},
      {"(exp(z)-1)^2", "z^2"},
  };
}

// Randomized systems that are N-subgeneral by construction:
//  - moment-curve rows with distinct parameters (N = n, general position),
//  - repeated points in P^1 with multiplicities at most N,
//  - a pencil of concurrent lines in P^2 padded with moment rows,
//  - moment rows in P^3 with one row duplicated (N = n + 1).
// Every system satisfies q > 2N - n + 1 so the weight solver applies.
inline std::vector<nevlab::projgeom::HyperplaneSystem> weight_battery(
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<nevlab::projgeom::HyperplaneSystem> out;

  // General position, N = n.
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::uniform_int_distribution<int> qd(n + 2, 10);
    const int q = qd(rng);
    std::vector<double> ts = distinct_parameters(rng, q);
    std::vector<std::vector<double>> rows;
    for (double t : ts) rows.push_back(moment_row(t, n));
    out.push_back(system_from_rows(rows, n, n));
  }

  // P^1 with repeated directions: multiplicity at most N keeps every
  // (N+1)-subset of rank 2.
  for (int i = 0; i < 15; ++i) {
    const int N = 2 + static_cast<int>(rng() % 3);
    std::uniform_int_distribution<int> qd(2 * N + 1, 10);
    const int q = qd(rng);
    std::vector<double> ts = distinct_parameters(rng, q);
    std::vector<int> mult;
    int placed = 0;
    std::size_t point = 0;
    while (placed < q) {
      std::uniform_int_distribution<int> md(1, std::min(N, q - placed));
      const int m = md(rng);
      mult.push_back(m);
      placed += m;
      ++point;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < mult.size(); ++k)
      for (int r = 0; r < mult[k]; ++r) rows.push_back(moment_row(ts[k], 1));
    std::shuffle(rows.begin(), rows.end(), rng);
    out.push_back(system_from_rows(rows, N, 1));
  }

  // P^2, N = 3: three concurrent lines through (0:0:1) plus generic rows.
  for (int i = 0; i < 10; ++i) {
    std::uniform_int_distribution<int> qd(6, 10);
    const int q = qd(rng);
    std::vector<std::vector<double>> rows = {
        {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}};
    std::vector<double> ts = distinct_parameters(rng, q - 3);
    for (double t : ts) rows.push_back(moment_row(t + 0.5, 2));
    std::shuffle(rows.begin(), rows.end(), rng);
    out.push_back(system_from_rows(rows, 3, 2));
  }

  // P^3 general position.
  for (int i = 0; i < 5; ++i) {
    std::uniform_int_distribution<int> qd(5, 10);
    const int q = qd(rng);
    std::vector<double> ts = distinct_parameters(rng, q);
    std::vector<std::vector<double>> rows;
    for (double t : ts) rows.push_back(moment_row(t, 3));
    out.push_back(system_from_rows(rows, 3, 3));
  }

  // P^3, N = 4: one moment row duplicated.
  for (int i = 0; i < 5; ++i) {
    std::uniform_int_distribution<int> qd(7, 10);
    const int q = qd(rng);
    std::vector<double> ts = distinct_parameters(rng, q - 1);
    std::vector<std::vector<double>> rows;
    for (double t : ts) rows.push_back(moment_row(t, 3));
    rows.push_back(moment_row(ts[0], 3));
    std::shuffle(rows.begin(), rows.end(), rng);
    out.push_back(system_from_rows(rows, 4, 3));
  }

  return out;
}

}  // namespace testutil
