#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace nevlab::funcalg {

using Complex = std::complex<double>;

/// Magnitudes below this are treated as an exact hit on a zero of a
/// denominator when evaluating quotients.
inline constexpr double kPoleEps = 1e-12;

/// Threshold of the sampled identically-zero test.
inline constexpr double kZeroTestEps = 1e-9;

/// Node kinds of the closed-form expression tree. Shift keeps its offset in
/// ExprNode::value; IntPower keeps its exponent in ExprNode::exponent.
enum class NodeKind {
  kConstant,
  kVariable,
  kSum,
  kDifference,
  kProduct,
  kQuotient,
  kIntPower,
  kExp,
  kSin,
  kCos,
  kShift,
  kDerivative,
};

class Expr;

struct ExprNode {
  NodeKind kind;
  Complex value{};    // kConstant: the constant; kShift: the offset
  int exponent{0};    // kIntPower only
  std::vector<Expr> children;
};

enum class EvalStatus { kValue, kPole, kIndeterminate };

/// Result of pointwise evaluation. A pole marker is produced exactly when a
/// quotient (or negative power) sees |denominator| < pole_eps while the
/// numerator stays >= pole_eps; a 0/0 hit or a non-finite intermediate is
/// indeterminate, with `overflow` set when the cause was overflow.
struct EvalResult {
  EvalStatus status{EvalStatus::kValue};
  Complex value{};
  bool overflow{false};

  static EvalResult of(Complex v) { return {EvalStatus::kValue, v, false}; }
  static EvalResult pole() { return {EvalStatus::kPole, {}, false}; }
  static EvalResult indeterminate(bool overflowed = false) {
    return {EvalStatus::kIndeterminate, {}, overflowed};
  }

  bool is_value() const { return status == EvalStatus::kValue; }
  bool is_pole() const { return status == EvalStatus::kPole; }
  bool is_indeterminate() const { return status == EvalStatus::kIndeterminate; }
};

/// Immutable expression over one complex variable. Copies are cheap (shared
/// subtrees); all mutating "operations" build new trees. Construction folds
/// constants and applies the structural identities (shift composition,
/// multiplication by 0/1) but performs no general simplification.
class Expr {
public:
  /// Default-constructs the constant 0 so Expr works in containers.
  Expr();

  static Expr constant(Complex c);
  static Expr variable();

  static Expr sum(const Expr& a, const Expr& b);
  static Expr difference(const Expr& a, const Expr& b);
  static Expr product(const Expr& a, const Expr& b);

  /// Throws nevlab::Error when the denominator is identically zero
  /// (sampled test, see is_identically_zero).
  static Expr quotient(const Expr& num, const Expr& den);

  static Expr int_power(const Expr& base, int exponent);
  static Expr exp_of(const Expr& a);
  static Expr sin_of(const Expr& a);
  static Expr cos_of(const Expr& a);

  /// The node form of z |-> child(z + offset). Nested shift nodes compose
  /// additively at construction.
  static Expr shift_node(const Expr& child, Complex offset);

  /// The node form of d/dz child. The exact symbolic derivative is resolved
  /// eagerly and stored alongside the child; evaluation never falls back to
  /// finite differences.
  static Expr derivative_node(const Expr& child);

  const ExprNode& node() const { return *node_; }
  NodeKind kind() const { return node_->kind; }

  /// Infix rendering, parseable by nevlab::funcalg::parse_expr.
  std::string to_string() const;

private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  static Expr make(ExprNode&& n);

  std::shared_ptr<const ExprNode> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Pointwise evaluation at z.
EvalResult eval(const Expr& e, Complex z, double pole_eps = kPoleEps);

/// e'(z) = e(z + c): structural substitution of the variable, so nested
/// shifts compose additively and shift commutes with differentiate.
Expr shift(const Expr& e, Complex c);

/// Exact symbolic derivative.
Expr differentiate(const Expr& e);

/// Sampled test: evaluates e at `count` points drawn uniformly (by area) from
/// the annulus 0.5 <= |z| <= 2, skipping points where evaluation fails, and
/// declares e identically zero when every valid sample is below kZeroTestEps
/// in magnitude. Deterministic for a fixed seed.
bool is_identically_zero(const Expr& e, std::uint64_t seed = 0x5eedbeef,
                         int count = 64);

/// The sample battery used by the probabilistic checks: `count` points drawn
/// uniformly by area from the annulus 0.5 <= |z| <= 2.
std::vector<Complex> annulus_samples(int count, std::uint64_t seed);

/// True when the tree contains a quotient or negative integer power, i.e.
/// evaluation may produce poles.
bool has_pole_risk(const Expr& e);

/// Formats a complex constant in the literal grammar accepted by the parser,
/// e.g. "2", "-1.5i", "3+0.25i".
std::string format_complex(Complex c);

}  // namespace nevlab::funcalg
