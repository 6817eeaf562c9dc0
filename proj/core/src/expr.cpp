#include "nevlab/expr.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nevlab/errors.hpp"

namespace nevlab::funcalg {

namespace {

bool finite(Complex v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

bool is_const(const Expr& e) { return e.kind() == NodeKind::kConstant; }

bool is_const_value(const Expr& e, Complex v) {
  return is_const(e) && e.node().value == v;
}

Complex pow_int(Complex base, unsigned k) {
  Complex acc{1.0, 0.0};
  Complex b = base;
  while (k != 0) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1u;
  }
  return acc;
}

}  // namespace

Expr Expr::make(ExprNode&& n) {
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr::Expr() : Expr(constant({0.0, 0.0})) {}

Expr Expr::constant(Complex c) {
  return make({NodeKind::kConstant, c, 0, {}});
}

Expr Expr::variable() { return make({NodeKind::kVariable, {}, 0, {}}); }

Expr Expr::sum(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    Complex v = a.node().value + b.node().value;
    if (finite(v)) return constant(v);
  }
  if (is_const_value(a, {0.0, 0.0})) return b;
  if (is_const_value(b, {0.0, 0.0})) return a;
  return make({NodeKind::kSum, {}, 0, {a, b}});
}

Expr Expr::difference(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    Complex v = a.node().value - b.node().value;
    if (finite(v)) return constant(v);
  }
  if (is_const_value(b, {0.0, 0.0})) return a;
  return make({NodeKind::kDifference, {}, 0, {a, b}});
}

Expr Expr::product(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    Complex v = a.node().value * b.node().value;
    if (finite(v)) return constant(v);
  }
  if (is_const_value(a, {0.0, 0.0}) || is_const_value(b, {0.0, 0.0}))
    return constant({0.0, 0.0});
  if (is_const_value(a, {1.0, 0.0})) return b;
  if (is_const_value(b, {1.0, 0.0})) return a;
  return make({NodeKind::kProduct, {}, 0, {a, b}});
}

Expr Expr::quotient(const Expr& num, const Expr& den) {
  if (is_const(den)) {
    Complex d = den.node().value;
    if (std::abs(d) < kPoleEps)
      throw Error("quotient: denominator is the zero constant");
    if (is_const(num)) {
      Complex v = num.node().value / d;
      if (finite(v)) return constant(v);
    }
  } else if (is_identically_zero(den)) {
    throw Error("quotient: denominator vanishes identically (sampled test)");
  }
  return make({NodeKind::kQuotient, {}, 0, {num, den}});
}

Expr Expr::int_power(const Expr& base, int exponent) {
  if (exponent == 0) return constant({1.0, 0.0});
  if (exponent == 1) return base;
  if (is_const(base)) {
    Complex b = base.node().value;
    if (exponent < 0) {
      Complex w = pow_int(b, static_cast<unsigned>(-exponent));
      if (std::abs(w) < kPoleEps)
        throw Error("int_power: zero constant raised to a negative power");
      Complex v = Complex{1.0, 0.0} / w;
      if (finite(v)) return constant(v);
    } else {
      Complex v = pow_int(b, static_cast<unsigned>(exponent));
      if (finite(v)) return constant(v);
    }
  }
  if (base.kind() == NodeKind::kIntPower) {
    long combined = static_cast<long>(base.node().exponent) * exponent;
    if (combined >= -1000 && combined <= 1000)
      return int_power(base.node().children[0], static_cast<int>(combined));
  }
  ExprNode n{NodeKind::kIntPower, {}, exponent, {base}};
  return make(std::move(n));
}

Expr Expr::exp_of(const Expr& a) {
  if (is_const(a)) {
    Complex v = std::exp(a.node().value);
    if (finite(v)) return constant(v);
  }
  return make({NodeKind::kExp, {}, 0, {a}});
}

Expr Expr::sin_of(const Expr& a) {
  if (is_const(a)) {
    Complex v = std::sin(a.node().value);
    if (finite(v)) return constant(v);
  }
  return make({NodeKind::kSin, {}, 0, {a}});
}

Expr Expr::cos_of(const Expr& a) {
  if (is_const(a)) {
    Complex v = std::cos(a.node().value);
    if (finite(v)) return constant(v);
  }
  return make({NodeKind::kCos, {}, 0, {a}});
}

Expr Expr::shift_node(const Expr& child, Complex offset) {
  if (offset == Complex{0.0, 0.0}) return child;
  if (is_const(child)) return child;
  if (child.kind() == NodeKind::kShift)
    return shift_node(child.node().children[0], child.node().value + offset);
  return make({NodeKind::kShift, offset, 0, {child}});
}

Expr Expr::derivative_node(const Expr& child) {
  if (is_const(child)) return constant({0.0, 0.0});
  if (child.kind() == NodeKind::kVariable) return constant({1.0, 0.0});
  return make({NodeKind::kDerivative, {}, 0, {child, differentiate(child)}});
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum(a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::difference(a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product(a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) {
  return Expr::product(Expr::constant({-1.0, 0.0}), a);
}

namespace {

EvalResult checked(Complex v, bool any_overflow = false) {
  if (!finite(v)) return EvalResult::indeterminate(true);
  EvalResult r = EvalResult::of(v);
  r.overflow = any_overflow;
  return r;
}

}  // namespace

EvalResult eval(const Expr& e, Complex z, double pole_eps) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return checked(n.value);
    case NodeKind::kVariable:
      return checked(z);
    case NodeKind::kSum:
    case NodeKind::kDifference: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      EvalResult b = eval(n.children[1], z, pole_eps);
      if (a.is_indeterminate() || b.is_indeterminate())
        return EvalResult::indeterminate(a.overflow || b.overflow);
      if (a.is_pole() && b.is_pole()) return EvalResult::indeterminate();
      if (a.is_pole() || b.is_pole()) return EvalResult::pole();
      Complex v = n.kind == NodeKind::kSum ? a.value + b.value
                                           : a.value - b.value;
      return checked(v);
    }
    case NodeKind::kProduct: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      EvalResult b = eval(n.children[1], z, pole_eps);
      if (a.is_indeterminate() || b.is_indeterminate())
        return EvalResult::indeterminate(a.overflow || b.overflow);
      if (a.is_pole() && b.is_pole()) return EvalResult::pole();
      if (a.is_pole() || b.is_pole()) {
        Complex other = a.is_pole() ? b.value : a.value;
        if (std::abs(other) < pole_eps) return EvalResult::indeterminate();
        return EvalResult::pole();
      }
      return checked(a.value * b.value);
    }
    case NodeKind::kQuotient: {
      EvalResult num = eval(n.children[0], z, pole_eps);
      EvalResult den = eval(n.children[1], z, pole_eps);
      if (num.is_indeterminate() || den.is_indeterminate())
        return EvalResult::indeterminate(num.overflow || den.overflow);
      if (num.is_pole() && den.is_pole()) return EvalResult::indeterminate();
      if (num.is_pole()) return EvalResult::pole();
      if (den.is_pole()) return checked({0.0, 0.0});
      if (std::abs(den.value) < pole_eps) {
        if (std::abs(num.value) >= pole_eps) return EvalResult::pole();
        return EvalResult::indeterminate();
      }
      return checked(num.value / den.value);
    }
    case NodeKind::kIntPower: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      if (a.is_indeterminate()) return a;
      int k = n.exponent;
      if (a.is_pole()) {
        if (k > 0) return EvalResult::pole();
        return checked({0.0, 0.0});
      }
      if (k > 0) return checked(pow_int(a.value, static_cast<unsigned>(k)));
      Complex w = pow_int(a.value, static_cast<unsigned>(-k));
      if (!finite(w)) return EvalResult::indeterminate(true);
      if (std::abs(w) < pole_eps) return EvalResult::pole();
      return checked(Complex{1.0, 0.0} / w);
    }
    case NodeKind::kExp: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      if (a.is_indeterminate()) return a;
      if (a.is_pole()) return EvalResult::indeterminate();
      return checked(std::exp(a.value));
    }
    case NodeKind::kSin: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      if (a.is_indeterminate()) return a;
      if (a.is_pole()) return EvalResult::indeterminate();
      return checked(std::sin(a.value));
    }
    case NodeKind::kCos: {
      EvalResult a = eval(n.children[0], z, pole_eps);
      if (a.is_indeterminate()) return a;
      if (a.is_pole()) return EvalResult::indeterminate();
      return checked(std::cos(a.value));
    }
    case NodeKind::kShift:
      return eval(n.children[0], z + n.value, pole_eps);
    case NodeKind::kDerivative:
      return eval(n.children[1], z, pole_eps);
  }
  return EvalResult::indeterminate();
}

Expr shift(const Expr& e, Complex c) {
  if (c == Complex{0.0, 0.0}) return e;
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return e;
    case NodeKind::kVariable:
      return Expr::sum(Expr::variable(), Expr::constant(c));
    case NodeKind::kSum:
      return Expr::sum(shift(n.children[0], c), shift(n.children[1], c));
    case NodeKind::kDifference:
      return Expr::difference(shift(n.children[0], c), shift(n.children[1], c));
    case NodeKind::kProduct:
      return Expr::product(shift(n.children[0], c), shift(n.children[1], c));
    case NodeKind::kQuotient:
      return Expr::quotient(shift(n.children[0], c), shift(n.children[1], c));
    case NodeKind::kIntPower:
      return Expr::int_power(shift(n.children[0], c), n.exponent);
    case NodeKind::kExp:
      return Expr::exp_of(shift(n.children[0], c));
    case NodeKind::kSin:
      return Expr::sin_of(shift(n.children[0], c));
    case NodeKind::kCos:
      return Expr::cos_of(shift(n.children[0], c));
    case NodeKind::kShift:
      // child evaluated at z + offset, substituted -> offsets add up.
      return Expr::shift_node(n.children[0], n.value + c);
    case NodeKind::kDerivative:
      // d/dz and the substitution z -> z + c commute for constant offsets.
      return Expr::derivative_node(shift(n.children[0], c));
  }
  return e;
}

Expr differentiate(const Expr& e) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return Expr::constant({0.0, 0.0});
    case NodeKind::kVariable:
      return Expr::constant({1.0, 0.0});
    case NodeKind::kSum:
      return Expr::sum(differentiate(n.children[0]), differentiate(n.children[1]));
    case NodeKind::kDifference:
      return Expr::difference(differentiate(n.children[0]),
                              differentiate(n.children[1]));
    case NodeKind::kProduct: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      return Expr::sum(Expr::product(differentiate(a), b),
                       Expr::product(a, differentiate(b)));
    }
    case NodeKind::kQuotient: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      Expr num = Expr::difference(Expr::product(differentiate(a), b),
                                  Expr::product(a, differentiate(b)));
      return Expr::quotient(num, Expr::int_power(b, 2));
    }
    case NodeKind::kIntPower: {
      const Expr& a = n.children[0];
      Expr coeff = Expr::constant({static_cast<double>(n.exponent), 0.0});
      return Expr::product(
          Expr::product(coeff, Expr::int_power(a, n.exponent - 1)),
          differentiate(a));
    }
    case NodeKind::kExp:
      return Expr::product(e, differentiate(n.children[0]));
    case NodeKind::kSin:
      return Expr::product(Expr::cos_of(n.children[0]),
                           differentiate(n.children[0]));
    case NodeKind::kCos:
      return Expr::product(
          Expr::product(Expr::constant({-1.0, 0.0}),
                        Expr::sin_of(n.children[0])),
          differentiate(n.children[0]));
    case NodeKind::kShift:
      return Expr::shift_node(differentiate(n.children[0]), n.value);
    case NodeKind::kDerivative:
      return differentiate(n.children[1]);
  }
  return Expr::constant({0.0, 0.0});
}

std::vector<Complex> annulus_samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double r = std::sqrt(0.25 + unit(rng) * (4.0 - 0.25));
    double theta = 2.0 * M_PI * unit(rng);
    out.emplace_back(r * std::cos(theta), r * std::sin(theta));
  }
  return out;
}

bool is_identically_zero(const Expr& e, std::uint64_t seed, int count) {
  int valid = 0;
  std::vector<Complex> pts = annulus_samples(3 * count, seed);
  for (Complex z : pts) {
    EvalResult r = eval(e, z);
    if (!r.is_value()) continue;
    if (std::abs(r.value) >= kZeroTestEps) return false;
    if (++valid >= count) return true;
  }
  // Too few evaluable samples to certify anything: report "not zero".
  return valid >= count / 2 && valid > 0;
}

bool has_pole_risk(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == NodeKind::kQuotient) return true;
  if (n.kind == NodeKind::kIntPower && n.exponent < 0) return true;
  for (const Expr& c : n.children)
    if (has_pole_risk(c)) return true;
  return false;
}

namespace {

std::string format_double(double v) {
  if (v == 0.0) return "0";
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::ostringstream t;
    t.precision(prec);
    t << v;
    if (std::stod(t.str()) == v) return t.str();
  }
  return s;
}

// Rendering precedence: additive 1, multiplicative 2, power 3, atom 4.
std::string render(const Expr& e, int parent_prec);

std::string render_constant(Complex c, int parent_prec) {
  std::string s = format_complex(c);
  bool compound = s.find_first_of("+-", 1) != std::string::npos ||
                  s.front() == '-';
  if (compound && parent_prec >= 2) return "(" + s + ")";
  return s;
}

std::string render(const Expr& e, int parent_prec) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return render_constant(n.value, parent_prec);
    case NodeKind::kVariable:
      return "z";
    case NodeKind::kSum: {
      std::string s = render(n.children[0], 1) + "+" + render(n.children[1], 2);
      return parent_prec > 1 ? "(" + s + ")" : s;
    }
    case NodeKind::kDifference: {
      std::string s = render(n.children[0], 1) + "-" + render(n.children[1], 2);
      return parent_prec > 1 ? "(" + s + ")" : s;
    }
    case NodeKind::kProduct: {
      std::string s = render(n.children[0], 2) + "*" + render(n.children[1], 2);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case NodeKind::kQuotient: {
      std::string s = render(n.children[0], 2) + "/" + render(n.children[1], 3);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case NodeKind::kIntPower:
      return render(n.children[0], 4) + "^" + std::to_string(n.exponent);
    case NodeKind::kExp:
      return "exp(" + render(n.children[0], 1) + ")";
    case NodeKind::kSin:
      return "sin(" + render(n.children[0], 1) + ")";
    case NodeKind::kCos:
      return "cos(" + render(n.children[0], 1) + ")";
    case NodeKind::kShift:
      return "shift(" + render(n.children[0], 1) + "," + format_complex(n.value) +
             ")";
    case NodeKind::kDerivative:
      return "diff(" + render(n.children[0], 1) + ")";
  }
  return "0";
}

}  // namespace

std::string format_complex(Complex c) {
  double a = c.real();
  double b = c.imag();
  if (b == 0.0) return format_double(a);
  std::string im = format_double(std::abs(b)) + "i";
  if (a == 0.0) return (b < 0.0 ? "-" : "") + im;
  return format_double(a) + (b < 0.0 ? "-" : "+") + im;
}

std::string Expr::to_string() const { return render(*this, 1); }

}  // namespace nevlab::funcalg
