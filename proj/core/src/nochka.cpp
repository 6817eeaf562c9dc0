#include "nevlab/nochka.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nevlab/simplex.hpp"

namespace nevlab::nochka {

namespace {

std::string subset_string(std::span<const int> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

void require_preconditions(const HyperplaneSystem& sys) {
  const int q = sys.q();
  if (q <= 2 * sys.N - sys.n + 1)
    throw Error("nochka: requires q(>2N-n+1); got q=" + std::to_string(q) +
                ", 2N-n+1=" + std::to_string(2 * sys.N - sys.n + 1));
  projgeom::PositionCertificate cert = projgeom::check_subgeneral(sys);
  if (!cert.pass)
    throw Error("nochka: hyperplanes are not in " + std::to_string(sys.N) +
                "-subgeneral position (witness subset " +
                subset_string(*cert.witness) + " has rank " +
                std::to_string(cert.witness_rank) + ")");
}

struct RankedSubset {
  std::vector<int> subset;
  int rank;
};

// Rank constraints that can actually bind, i.e. not implied by
// sum <= |R| * (n/N) and not dominated by an equal-rank superset.
std::vector<RankedSubset> binding_rank_constraints(const HyperplaneSystem& sys) {
  const int q = sys.q();
  const Rational hi(sys.n, sys.N);
  std::map<std::vector<int>, int> rank_of;
  for (int size = 1; size <= sys.N + 1; ++size)
    for (auto& s : projgeom::subsets_of_size(q, size))
      rank_of[s] = projgeom::rank_of_subset(sys, s);

  std::vector<RankedSubset> out;
  for (const auto& [subset, rank] : rank_of) {
    if (Rational(static_cast<int>(subset.size())) * hi <= Rational(rank))
      continue;  // cannot bind below omega_tilde <= n/N
    bool dominated = false;
    if (static_cast<int>(subset.size()) < sys.N + 1) {
      std::vector<int> ext(subset.begin(), subset.end());
      ext.push_back(0);
      for (int j = 0; j < q && !dominated; ++j) {
        if (std::binary_search(subset.begin(), subset.end(), j)) continue;
        ext.back() = j;
        std::sort(ext.begin(), ext.end());
        auto it = rank_of.find(ext);
        if (it != rank_of.end() && it->second == rank) dominated = true;
        ext.assign(subset.begin(), subset.end());
        ext.push_back(0);
      }
    }
    if (!dominated) out.push_back({subset, rank});
  }
  return out;
}

// Variable layout of the weight LP: omega_0..omega_{q-1}, omega_tilde, t.
lp::Problem base_problem(const HyperplaneSystem& sys,
                         const std::vector<RankedSubset>& ranked) {
  const int q = sys.q();
  const int vt = q;      // omega_tilde column
  const int vmin = q + 1;  // t column (lower bound on all weights)
  const Rational lo(sys.n + 1, 2 * sys.N - sys.n + 1);
  const Rational hi(sys.n, sys.N);
  const int k = q - 2 * sys.N + sys.n - 1;

  lp::Problem p;
  p.num_vars = q + 2;
  p.objective.assign(p.num_vars, Rational(0));

  auto row = [&](lp::Constraint::Type type, Rational rhs) {
    lp::Constraint c;
    c.coeffs.assign(p.num_vars, Rational(0));
    c.rhs = rhs;
    c.type = type;
    p.rows.push_back(std::move(c));
    return &p.rows.back();
  };

  for (int j = 0; j < q; ++j) {
    lp::Constraint* c = row(lp::Constraint::Type::kLessEq, Rational(0));
    c->coeffs[j] = 1;
    c->coeffs[vt] = -1;  // omega_j <= omega_tilde
  }
  for (int j = 0; j < q; ++j) {
    lp::Constraint* c = row(lp::Constraint::Type::kLessEq, Rational(0));
    c->coeffs[vmin] = 1;
    c->coeffs[j] = -1;  // t <= omega_j
  }
  {
    lp::Constraint* c = row(lp::Constraint::Type::kEqual, Rational(sys.n + 1));
    for (int j = 0; j < q; ++j) c->coeffs[j] = 1;
    c->coeffs[vt] = -k;  // sum omega = k omega_tilde + n + 1
  }
  {
    lp::Constraint* c = row(lp::Constraint::Type::kLessEq, hi);
    c->coeffs[vt] = 1;
  }
  {
    lp::Constraint* c = row(lp::Constraint::Type::kLessEq, -lo);
    c->coeffs[vt] = -1;
  }
  for (const RankedSubset& rs : ranked) {
    lp::Constraint* c = row(lp::Constraint::Type::kLessEq, Rational(rs.rank));
    for (int j : rs.subset) c->coeffs[j] = 1;
  }
  return p;
}

struct PinnedSolve {
  bool ok{false};
  std::vector<Rational> weights;
  Rational omega_tilde{0};
  Rational min_weight{0};
};

// With omega_{pin} = omega_tilde (and optionally omega_tilde fixed),
// maximize the minimum weight; positivity holds iff the optimum is > 0.
PinnedSolve solve_pinned(const lp::Problem& base, int q, int pin,
                         const std::optional<Rational>& fixed_value,
                         bool maximize_value) {
  lp::Problem p = base;
  {
    lp::Constraint c;
    c.coeffs.assign(p.num_vars, Rational(0));
    c.coeffs[pin] = 1;
    c.coeffs[q] = -1;
    c.rhs = 0;
    c.type = lp::Constraint::Type::kEqual;
    p.rows.push_back(std::move(c));
  }
  if (fixed_value) {
    lp::Constraint c;
    c.coeffs.assign(p.num_vars, Rational(0));
    c.coeffs[q] = 1;
    c.rhs = *fixed_value;
    c.type = lp::Constraint::Type::kEqual;
    p.rows.push_back(std::move(c));
  }

  PinnedSolve out;
  if (maximize_value) {
    p.objective[q] = 1;
    lp::Solution stage_a = lp::solve(p);
    if (stage_a.status != lp::LpStatus::kOptimal) return out;
    lp::Constraint c;
    c.coeffs.assign(p.num_vars, Rational(0));
    c.coeffs[q] = 1;
    c.rhs = stage_a.x[q];
    c.type = lp::Constraint::Type::kEqual;
    p.rows.push_back(std::move(c));
    p.objective[q] = 0;
  }
  p.objective[q + 1] = 1;  // maximize t
  lp::Solution s = lp::solve(p);
  if (s.status != lp::LpStatus::kOptimal) return out;
  out.ok = true;
  out.weights.assign(s.x.begin(), s.x.begin() + q);
  out.omega_tilde = s.x[q];
  out.min_weight = s.x[q + 1];
  return out;
}

[[noreturn]] void report_infeasible(const HyperplaneSystem& sys,
                                    const std::vector<RankedSubset>& ranked) {
  // Name the tightest structural obstruction: the subset whose rank bound is
  // smallest relative to the weight mass it must absorb.
  const Rational lo(sys.n + 1, 2 * sys.N - sys.n + 1);
  std::string tightest = "omega_tilde interval [" + to_string(lo) + ", " +
                         to_string(Rational(sys.n, sys.N)) + "]";
  Rational worst_slack;
  bool have = false;
  for (const RankedSubset& rs : ranked) {
    Rational slack = Rational(rs.rank) -
                     Rational(static_cast<int>(rs.subset.size())) * lo;
    if (!have || slack < worst_slack) {
      worst_slack = slack;
      have = true;
      tightest = "rank constraint on subset " + subset_string(rs.subset) +
                 " (rank " + std::to_string(rs.rank) + ")";
    }
  }
  throw InfeasibleError(
      "nochka: no strictly positive weight system exists; tightest "
      "constraint: " +
      tightest);
}

}  // namespace

NochkaWeights compute_weights(const HyperplaneSystem& sys) {
  require_preconditions(sys);
  const int q = sys.q();

  if (sys.N == sys.n) {
    // General position: the constraint system forces all weights to 1.
    NochkaWeights w;
    w.weights.assign(static_cast<std::size_t>(q), Rational(1));
    w.constant = 1;
    return w;
  }

  std::vector<RankedSubset> ranked = binding_rank_constraints(sys);
  lp::Problem base = base_problem(sys, ranked);

  // Largest feasible omega_tilde ignoring attainment, then try to attain it.
  lp::Problem relaxed = base;
  relaxed.objective[q] = 1;
  lp::Solution stage_a = lp::solve(relaxed);
  if (stage_a.status == lp::LpStatus::kOptimal) {
    Rational v = stage_a.x[q];
    for (int pin = 0; pin < q; ++pin) {
      PinnedSolve ps = solve_pinned(base, q, pin, v, false);
      if (ps.ok && ps.min_weight > 0) {
        NochkaWeights w;
        w.weights = std::move(ps.weights);
        w.constant = ps.omega_tilde;
        return w;
      }
    }
  }

  // The unpinned maximum is not attainable by any single weight; take the
  // largest omega_tilde that is, sweeping pin positions from the top.
  std::vector<PinnedSolve> candidates;
  for (int pin = 0; pin < q; ++pin) {
    PinnedSolve ps = solve_pinned(base, q, pin, std::nullopt, true);
    if (ps.ok && ps.min_weight > 0) candidates.push_back(std::move(ps));
  }
  if (!candidates.empty()) {
    auto best = std::max_element(
        candidates.begin(), candidates.end(),
        [](const PinnedSolve& a, const PinnedSolve& b) {
          if (a.omega_tilde != b.omega_tilde)
            return a.omega_tilde < b.omega_tilde;
          return a.min_weight < b.min_weight;
        });
    NochkaWeights w;
    w.weights = std::move(best->weights);
    w.constant = best->omega_tilde;
    return w;
  }

  report_infeasible(sys, ranked);
}

WeightCertificate verify_weights(const HyperplaneSystem& sys,
                                 const NochkaWeights& w) {
  WeightCertificate cert;
  const int q = sys.q();
  auto fail = [&cert](std::string what,
                      std::optional<std::vector<int>> subset = std::nullopt) {
    cert.violations.push_back({std::move(what), false, std::move(subset)});
  };

  if (static_cast<int>(w.weights.size()) != q) {
    fail("weight count != q");
    cert.pass = false;
    return cert;
  }

  Rational max_weight(0);
  for (int j = 0; j < q; ++j) {
    const Rational& wj = w.weights[j];
    if (!(wj > 0))
      fail("omega(" + std::to_string(j + 1) + ") is not positive");
    if (!(wj <= 1)) fail("omega(" + std::to_string(j + 1) + ") exceeds 1");
    if (wj > max_weight) max_weight = wj;
  }
  if (max_weight != w.constant)
    fail("omega_tilde is not the maximum weight (max = " +
         to_string(max_weight) + ", stated = " + to_string(w.constant) + ")");

  const int k = q - 2 * sys.N + sys.n - 1;
  Rational lhs(0);
  for (const Rational& wj : w.weights) lhs += wj;
  Rational rhs = w.constant * k + (sys.n + 1);
  if (lhs != rhs)
    fail("sum omega != omega_tilde(q-2N+n-1) + n+1 (" + to_string(lhs) +
         " vs " + to_string(rhs) + ")");

  const Rational lo(sys.n + 1, 2 * sys.N - sys.n + 1);
  const Rational hi(sys.n, sys.N);
  if (!(lo <= w.constant && w.constant <= hi))
    fail("omega_tilde outside [" + to_string(lo) + ", " + to_string(hi) + "]");

  for (int size = 1; size <= sys.N + 1; ++size) {
    for (auto& subset : projgeom::subsets_of_size(q, size)) {
      Rational total(0);
      for (int j : subset) total += w.weights[j];
      int rank = projgeom::rank_of_subset(sys, subset);
      if (total > Rational(rank))
        fail("subset weight sum " + to_string(total) + " exceeds rank " +
                 std::to_string(rank),
             subset);
    }
  }

  cert.pass = cert.violations.empty();
  return cert;
}

ProductSelection select_product_indices(const HyperplaneSystem& sys,
                                        const NochkaWeights& w,
                                        std::span<const double> E,
                                        std::span<const int> R) {
  const int q = sys.q();
  if (static_cast<int>(E.size()) != q)
    throw DimensionError("select_product_indices: need one value per plane");
  for (double e : E)
    if (!(e >= 1.0))
      throw Error("select_product_indices: values must be >= 1");
  if (R.empty() || static_cast<int>(R.size()) > sys.N + 1)
    throw Error("select_product_indices: need 0 < |R| <= N+1");

  std::vector<int> sorted_r(R.begin(), R.end());
  std::sort(sorted_r.begin(), sorted_r.end());
  const int rank = projgeom::rank_of_subset(sys, sorted_r);

  double lhs = 0.0;
  for (int j : sorted_r) lhs += to_double(w.weights[j]) * std::log(E[j]);

  ProductSelection best;
  bool have = false;
  for (auto& subset : projgeom::subsets_of_size(q, rank)) {
    if (projgeom::rank_of_subset(sys, subset) != rank) continue;
    double rhs = 0.0;
    for (int j : subset) rhs += std::log(E[j]);
    if (!have || rhs > best.selected_log_product) {
      best.indices = subset;
      best.selected_log_product = rhs;
      have = true;
    }
  }
  if (!have)
    throw Error("select_product_indices: no rank-preserving subset exists");
  best.weighted_log_product = lhs;
  if (best.selected_log_product < lhs - 1e-9)
    throw Error(
        "select_product_indices: selected product fails to dominate the "
        "weighted product; weights are inconsistent with the rank structure");
  return best;
}

}  // namespace nevlab::nochka
