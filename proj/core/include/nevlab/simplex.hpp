#pragma once

#include <vector>

#include "nevlab/rational.hpp"

namespace nevlab::lp {

/// A linear program over nonnegative variables with exact rational data:
///   maximize c.x  subject to  a.x <= b  or  a.x == b  rows, x >= 0.
struct Constraint {
  enum class Type { kLessEq, kEqual };
  std::vector<Rational> coeffs;
  Rational rhs;
  Type type{Type::kLessEq};
};

struct Problem {
  int num_vars{0};
  std::vector<Rational> objective;
  std::vector<Constraint> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  LpStatus status{LpStatus::kInfeasible};
  std::vector<Rational> x;
  Rational objective_value{0};
};

/// Two-phase dense simplex with Bland's rule; every pivot is exact.
Solution solve(const Problem& p);

}  // namespace nevlab::lp
