#include "nevlab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace nevlab::nevanlinna {

namespace detail {

namespace {

// Phase-step tolerance. arg(b/a) alone cannot tell a step of x from
// x - 2*pi, so a segment is only trusted once the Nyquist guard below
// certifies that its true rotation is small; this cap is a backstop.
constexpr double kMaxStep = 1.35;  // ~0.43 * pi
constexpr int kMaxDepth = 40;

struct PathSample {
  double s;
  Complex z;
  Complex v;
  // |e'/e| at z: local phase-rotation rate per unit of arc length.
  double rate;
};

PathSample eval_on_path(const Expr& e, const Expr& de,
                        const std::function<Complex(double)>& path, double s) {
  Complex z = path(s);
  funcalg::EvalResult r = funcalg::eval(e, z);
  if (!r.is_value())
    throw WindingError(r.is_pole()
                           ? "winding: pole on contour"
                           : "winding: evaluation failed on contour (overflow "
                             "or indeterminate point)");
  if (std::abs(r.value) < 1e-280)
    throw WindingError("winding: zero on contour");
  funcalg::EvalResult d = funcalg::eval(de, z);
  double rate = d.is_value()
                    ? std::abs(d.value) / std::abs(r.value)
                    : std::numeric_limits<double>::infinity();
  return {s, z, r.value, rate};
}

}  // namespace

int winding_number(const std::function<Complex(double)>& path, const Expr& e,
                   int base_samples) {
  const Expr de = funcalg::differentiate(e);
  double total = 0.0;
  // Work queue of segments [a, b] with cached endpoint values.
  struct Segment {
    PathSample a, b;
    int depth;
  };
  std::deque<Segment> work;
  PathSample first = eval_on_path(e, de, path, 0.0);
  PathSample prev = first;
  for (int k = 1; k <= base_samples; ++k) {
    double s = static_cast<double>(k) / base_samples;
    PathSample cur = k == base_samples ? first
                                       : eval_on_path(e, de, path, s);
    cur.s = k == base_samples ? 1.0 : s;
    work.push_back({prev, cur, 0});
    prev = cur;
  }
  while (!work.empty()) {
    Segment seg = work.front();
    work.pop_front();
    double darg = std::arg(seg.b.v / seg.a.v);
    // Nyquist guard: the rotation over the segment is at most (arc length)
    // times the local rate, so once that product is below one radian the
    // principal branch of arg is the true step and no full turn can hide
    // between the samples.
    double span = std::abs(seg.b.z - seg.a.z) * std::max(seg.a.rate, seg.b.rate);
    if (span <= 1.0 && std::abs(darg) <= kMaxStep) {
      total += darg;
      continue;
    }
    if (seg.depth >= kMaxDepth)
      throw WindingError(
          "winding: phase step failed to resolve (zero within ~1e-9 of the "
          "contour)");
    double mid = 0.5 * (seg.a.s + seg.b.s);
    PathSample m = eval_on_path(e, de, path, mid);
    work.push_front({m, seg.b, seg.depth + 1});
    work.push_front({seg.a, m, seg.depth + 1});
  }
  double w = total / (2.0 * M_PI);
  double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.25)
    throw WindingError("winding: total did not settle near an integer");
  return static_cast<int>(rounded);
}

}  // namespace detail

namespace {

void require_holomorphic(const Expr& e, const char* who) {
  if (funcalg::has_pole_risk(e))
    throw PoleRiskError(std::string(who) +
                        ": expression may have poles (quotient or negative "
                        "power present); count zeros and poles separately via "
                        "the Jensen route");
  if (funcalg::is_identically_zero(e))
    throw Error(std::string(who) + ": expression is identically zero");
}

int circle_winding(const Expr& e, double t) {
  auto path = [t](double s) {
    double theta = 2.0 * M_PI * s;
    return Complex{t * std::cos(theta), t * std::sin(theta)};
  };
  return detail::winding_number(path, e);
}

CountResult count_zeros_impl(const Expr& e, double t) {
  CountResult res;
  double radius = t;
  for (int attempt = 0;; ++attempt) {
    try {
      res.count = circle_winding(e, radius);
      res.used_radius = radius;
      res.perturbations = attempt;
      return res;
    } catch (const WindingError&) {
      if (attempt >= 3) throw;
      radius += 1e-4;
    }
  }
}

// ----- rectangle subdivision ------------------------------------------------

struct Rect {
  double x0, x1, y0, y1;

  Complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  double side() const { return std::max(x1 - x0, y1 - y0); }
  bool contains(Complex p, double slack) const {
    return p.real() >= x0 - slack && p.real() <= x1 + slack &&
           p.imag() >= y0 - slack && p.imag() <= y1 + slack;
  }
};

int rect_winding(const Expr& e, const Rect& r) {
  auto path = [&r](double s) -> Complex {
    double u = s * 4.0;
    if (u <= 1.0) return {r.x0 + u * (r.x1 - r.x0), r.y0};
    if (u <= 2.0) return {r.x1, r.y0 + (u - 1.0) * (r.y1 - r.y0)};
    if (u <= 3.0) return {r.x1 - (u - 2.0) * (r.x1 - r.x0), r.y1};
    return {r.x0, r.y1 - (u - 3.0) * (r.y1 - r.y0)};
  };
  return detail::winding_number(path, e);
}

int small_circle_winding(const Expr& e, Complex center, double radius) {
  auto path = [center, radius](double s) {
    double theta = 2.0 * M_PI * s;
    return center + Complex{radius * std::cos(theta), radius * std::sin(theta)};
  };
  return detail::winding_number(path, e, 64);
}

struct Localizer {
  const Expr& e;
  Expr de;
  Expr dde;
  std::vector<Divisor::Point> found;

  explicit Localizer(const Expr& expr)
      : e(expr), de(funcalg::differentiate(expr)), dde(funcalg::differentiate(de)) {}

  // Newton iteration on e/e', which has a simple zero at every zero of e
  // regardless of multiplicity. Returns nullopt when it fails to converge
  // inside the inflated rectangle.
  std::optional<Complex> newton(Complex z0, const Rect& box) {
    Complex z = z0;
    double slack = 0.75 * box.side();
    for (int it = 0; it < 80; ++it) {
      funcalg::EvalResult ev = funcalg::eval(e, z);
      funcalg::EvalResult dv = funcalg::eval(de, z);
      funcalg::EvalResult ddv = funcalg::eval(dde, z);
      if (!ev.is_value() || !dv.is_value() || !ddv.is_value())
        return std::nullopt;
      Complex denom = dv.value * dv.value - ev.value * ddv.value;
      if (std::abs(denom) < 1e-290) return std::nullopt;
      Complex step = ev.value * dv.value / denom;
      z -= step;
      if (!box.contains(z, slack)) return std::nullopt;
      if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
        // Two polish iterations.
        for (int p = 0; p < 2; ++p) {
          funcalg::EvalResult pe = funcalg::eval(e, z);
          funcalg::EvalResult pd = funcalg::eval(de, z);
          funcalg::EvalResult pdd = funcalg::eval(dde, z);
          if (!pe.is_value() || !pd.is_value() || !pdd.is_value()) break;
          Complex pden = pd.value * pd.value - pe.value * pdd.value;
          if (std::abs(pden) < 1e-290) break;
          z -= pe.value * pd.value / pden;
        }
        return z;
      }
    }
    return std::nullopt;
  }

  // Attempt to close out a rectangle with w zeros by polishing a single
  // location and confirming the full multiplicity on a small circle.
  bool try_newton_close(const Rect& box, int w) {
    std::optional<Complex> rho = newton(box.center(), box);
    if (!rho) return false;
    double isolation = std::max(1e-7, 0.02 * box.side());
    int wc;
    try {
      wc = small_circle_winding(e, *rho, isolation);
    } catch (const WindingError&) {
      return false;
    }
    if (wc != w) return false;
    found.push_back({*rho, w});
    return true;
  }

  void subdivide(const Rect& box, int w, int depth) {
    if (w == 0) return;
    if (depth > 80)
      throw WindingError("localize_zeros: subdivision failed to isolate zeros");
    double side = box.side();
    if (side < 1e-9) {
      // Unresolvable cluster: report its center with the combined count.
      found.push_back({box.center(), w});
      return;
    }
    if (side < 0.5 && try_newton_close(box, w)) return;

    // Split at an interior cross; nudge the cross when a zero lands on it.
    for (int attempt = 0; attempt < 5; ++attempt) {
      double fx = 0.5 + 0.011 * attempt;
      double fy = 0.5 + 0.017 * attempt;
      double mx = box.x0 + fx * (box.x1 - box.x0);
      double my = box.y0 + fy * (box.y1 - box.y0);
      Rect quads[4] = {
          {box.x0, mx, box.y0, my},
          {mx, box.x1, box.y0, my},
          {box.x0, mx, my, box.y1},
          {mx, box.x1, my, box.y1},
      };
      int ws[4];
      int total = 0;
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i) {
        try {
          ws[i] = rect_winding(e, quads[i]);
          total += ws[i];
        } catch (const WindingError&) {
          ok = false;
        }
      }
      if (!ok || total != w) continue;
      for (int i = 0; i < 4; ++i) subdivide(quads[i], ws[i], depth + 1);
      return;
    }
    throw WindingError(
        "localize_zeros: could not split a rectangle without hitting a zero");
  }
};

Divisor merge_points(std::vector<Divisor::Point> pts, double tol) {
  Divisor d;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.location.real() != b.location.real())
      return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  for (const auto& p : pts) {
    bool merged = false;
    for (auto& q : d.points) {
      if (std::abs(q.location - p.location) <= tol) {
        q.location = (q.location * static_cast<double>(q.multiplicity) +
                      p.location * static_cast<double>(p.multiplicity)) /
                     static_cast<double>(q.multiplicity + p.multiplicity);
        q.multiplicity += p.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) d.points.push_back(p);
  }
  return d;
}

}  // namespace

CountResult count_zeros(const Expr& e, double t) {
  if (!(t > 0.0)) throw Error("count_zeros: radius must be positive");
  require_holomorphic(e, "count_zeros");
  return count_zeros_impl(e, t);
}

Divisor localize_zeros(const Expr& e, double t) {
  if (!(t > 0.0)) throw Error("localize_zeros: radius must be positive");
  require_holomorphic(e, "localize_zeros");
  CountResult total = count_zeros_impl(e, t);
  if (total.count == 0) return {};

  // The root rectangle covers the disk with margin; its center is jittered
  // so axis-aligned zeros (a common symmetric layout) avoid the split lines.
  const double R = total.used_radius;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Complex jitter = R * Complex{7.1e-3 + 1.3e-2 * attempt,
                                 -4.3e-3 + 0.9e-2 * attempt};
    Rect root{-1.05 * R + jitter.real(), 1.05 * R + jitter.real(),
              -1.05 * R + jitter.imag(), 1.05 * R + jitter.imag()};
    Localizer loc(e);
    try {
      int root_w = rect_winding(e, root);
      loc.subdivide(root, root_w, 0);
    } catch (const WindingError&) {
      continue;
    }
    Divisor d = merge_points(std::move(loc.found), 1e-8);
    // Keep the zeros inside the counted disk and cross-check the total.
    Divisor inside;
    for (const auto& p : d.points)
      if (std::abs(p.location) <= R) inside.points.push_back(p);
    if (inside.total() == total.count) return inside;
  }
  throw WindingError(
      "localize_zeros: localized total never matched the circle count");
}

double counting_integral(const Divisor& d, double r) {
  if (!(r > 1.0)) throw Error("counting_integral: radius must exceed 1");
  double sum = 0.0;
  for (const auto& p : d.points) {
    double m = std::abs(p.location);
    if (m <= 1.0)
      sum += p.multiplicity * std::log(r);
    else if (m <= r)
      sum += p.multiplicity * std::log(r / m);
  }
  return sum;
}

double counting_integral(const Expr& e, double r) {
  return counting_integral(localize_zeros(e, r), r);
}

}  // namespace nevlab::nevanlinna
