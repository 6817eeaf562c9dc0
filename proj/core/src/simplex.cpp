#include "nevlab/simplex.hpp"

#include <algorithm>

namespace nevlab::lp {

namespace {

// Dense tableau:
//   rows 0..m-1: basic rows, columns 0..n_total-1 plus rhs in column n_total
//   row m: objective (reduced costs), maximized.
// Bland's rule keeps the exact pivoting cycle-free.
class Tableau {
public:
  Tableau(int m, int n_total)
      : m_(m), n_(n_total), cells_((m + 1) * (n_total + 1), Rational(0)),
        basis_(m, -1) {}

  Rational& at(int r, int c) { return cells_[r * (n_ + 1) + c]; }
  const Rational& at(int r, int c) const { return cells_[r * (n_ + 1) + c]; }
  Rational& rhs(int r) { return at(r, n_); }
  Rational& obj(int c) { return at(m_, c); }

  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int pr, int pc) {
    Rational piv = at(pr, pc);
    for (int c = 0; c <= n_; ++c) at(pr, c) /= piv;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      Rational factor = at(r, pc);
      if (factor == 0) continue;
      for (int c = 0; c <= n_; ++c) at(r, c) -= factor * at(pr, c);
    }
    basis_[pr] = pc;
  }

  // Returns true on optimal, false on unbounded.
  bool iterate(const std::vector<bool>& allowed) {
    while (true) {
      int pc = -1;
      for (int c = 0; c < n_; ++c) {
        if (!allowed[c]) continue;
        if (obj(c) > 0) {
          pc = c;
          break;  // Bland: first improving column
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      Rational best;
      for (int r = 0; r < m_; ++r) {
        if (at(r, pc) <= 0) continue;
        Rational ratio = rhs(r) / at(r, pc);
        if (pr < 0 || ratio < best ||
            (ratio == best && basis_[r] < basis_[pr])) {
          pr = r;
          best = ratio;
        }
      }
      if (pr < 0) return false;
      pivot(pr, pc);
    }
  }

private:
  int m_;
  int n_;
  std::vector<Rational> cells_;
  std::vector<int> basis_;
};

}  // namespace

Solution solve(const Problem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = p.num_vars;

  // Layout: structural vars | slack vars (one per <= row) | artificials.
  int num_slack = 0;
  for (const Constraint& c : p.rows)
    if (c.type == Constraint::Type::kLessEq) ++num_slack;
  const int n_total = n + num_slack + m;  // artificial per row, worst case
  Tableau t(m, n_total);

  int slack_at = n;
  int art_at = n + num_slack;
  std::vector<int> artificial_cols;
  for (int r = 0; r < m; ++r) {
    const Constraint& c = p.rows[r];
    if (static_cast<int>(c.coeffs.size()) != n)
      throw Error("lp::solve: constraint width mismatch");
    bool flip = c.rhs < 0;
    for (int j = 0; j < n; ++j)
      t.at(r, j) = flip ? -c.coeffs[j] : c.coeffs[j];
    t.rhs(r) = flip ? -c.rhs : c.rhs;
    if (c.type == Constraint::Type::kLessEq) {
      t.at(r, slack_at) = flip ? Rational(-1) : Rational(1);
      if (!flip && t.rhs(r) >= 0) {
        t.basis()[r] = slack_at;
      }
      ++slack_at;
    }
    if (t.basis()[r] < 0) {
      t.at(r, art_at) = 1;
      t.basis()[r] = art_at;
      artificial_cols.push_back(art_at);
      ++art_at;
    }
  }

  std::vector<bool> allowed(n_total, false);
  for (int c = 0; c < art_at; ++c) allowed[c] = true;

  // Phase 1: maximize -sum(artificials).
  if (!artificial_cols.empty()) {
    for (int col : artificial_cols) t.obj(col) = -1;
    // Price out the artificial basis.
    for (int r = 0; r < m; ++r) {
      if (std::find(artificial_cols.begin(), artificial_cols.end(),
                    t.basis()[r]) == artificial_cols.end())
        continue;
      for (int c = 0; c <= t.cols(); ++c) t.obj(c) += t.at(r, c);
    }
    t.iterate(allowed);
    Rational infeas = 0;
    for (int r = 0; r < m; ++r) {
      if (std::find(artificial_cols.begin(), artificial_cols.end(),
                    t.basis()[r]) != artificial_cols.end())
        infeas += t.rhs(r);
    }
    if (infeas != 0) {
      Solution s;
      s.status = LpStatus::kInfeasible;
      return s;
    }
    // Drive any degenerate artificial out of the basis when possible.
    for (int r = 0; r < m; ++r) {
      if (std::find(artificial_cols.begin(), artificial_cols.end(),
                    t.basis()[r]) == artificial_cols.end())
        continue;
      int pc = -1;
      for (int c = 0; c < n + num_slack; ++c) {
        if (t.at(r, c) != 0) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) t.pivot(r, pc);
    }
    // Clear the phase-1 objective and forbid artificials.
    for (int c = 0; c <= t.cols(); ++c) t.obj(c) = 0;
    for (int col : artificial_cols) allowed[col] = false;
  }

  // Phase 2: install the real objective, price out the basis, iterate.
  for (int j = 0; j < n; ++j)
    t.obj(j) = j < static_cast<int>(p.objective.size()) ? p.objective[j]
                                                        : Rational(0);
  for (int r = 0; r < m; ++r) {
    int b = t.basis()[r];
    if (b < 0 || b >= n) continue;
    Rational coeff = t.obj(b);
    if (coeff == 0) continue;
    for (int c = 0; c <= t.cols(); ++c) t.obj(c) -= coeff * t.at(r, c);
  }
  bool optimal = t.iterate(allowed);

  Solution s;
  if (!optimal) {
    s.status = LpStatus::kUnbounded;
    return s;
  }
  s.status = LpStatus::kOptimal;
  s.x.assign(n, Rational(0));
  for (int r = 0; r < m; ++r) {
    int b = t.basis()[r];
    if (b >= 0 && b < n) s.x[b] = t.rhs(r);
  }
  s.objective_value = 0;
  for (int j = 0; j < n; ++j)
    if (j < static_cast<int>(p.objective.size()))
      s.objective_value += p.objective[j] * s.x[j];
  return s;
}

}  // namespace nevlab::lp
