#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace rittcalc {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Stolz domains
// ---------------------------------------------------------------------------

/// B_theta: interior of the convex hull of {1} and the disc of radius sin(theta).
struct StolzDomain {
  double theta = pi / 2;
};

/// Open-set membership. Outside the disc, a point of the hull lies right of the
/// chord joining the tangent points (Re z = sin^2 theta) and inside the cone of
/// half-angle theta with apex 1.
inline bool stolz_contains(const StolzDomain& d, cplx z) {
  const double s = std::sin(d.theta);
  if (std::abs(z) < s) return true;
  const cplx w = 1.0 - z;
  if (w == cplx{0.0, 0.0}) return false;
  return z.real() > s * s && std::abs(std::arg(w)) < d.theta;
}

// ---------------------------------------------------------------------------
// Panels
// ---------------------------------------------------------------------------

enum class PanelKind { arc, segment };

/// One smooth piece of a contour, parametrized on t in [0, 1] in the direction
/// of traversal (orientation +1 means that direction is the positive one).
struct Panel {
  PanelKind kind = PanelKind::segment;
  // arc: z(t) = center + radius * exp(i (angle0 + t (angle1 - angle0)))
  cplx center{};
  double radius = 0;
  double angle0 = 0, angle1 = 0;
  // segment: z(t) = start + t (end - start)
  cplx start{}, end{};
  int orientation = +1;

  static Panel arc(cplx c, double rho, double a0, double a1) {
    Panel p;
    p.kind = PanelKind::arc;
    p.center = c;
    p.radius = rho;
    p.angle0 = a0;
    p.angle1 = a1;
    return p;
  }
  static Panel segment(cplx a, cplx b) {
    Panel p;
    p.kind = PanelKind::segment;
    p.start = a;
    p.end = b;
    return p;
  }

  cplx point(double t) const {
    if (kind == PanelKind::arc)
      return center + radius * std::polar(1.0, angle0 + t * (angle1 - angle0));
    return start + t * (end - start);
  }
  cplx derivative(double t) const {
    if (kind == PanelKind::arc) {
      const double span = angle1 - angle0;
      return cplx(0.0, radius * span) * std::polar(1.0, angle0 + t * span);
    }
    return end - start;
  }
  double length() const {
    if (kind == PanelKind::arc) return radius * std::abs(angle1 - angle0);
    return std::abs(end - start);
  }
  Panel scaled(double s) const {
    Panel p = *this;
    p.center *= s;
    p.radius *= s;
    p.start *= s;
    p.end *= s;
    return p;
  }
};

inline double total_length(std::span<const Panel> panels) {
  double l = 0;
  for (const auto& p : panels) l += p.length();
  return l;
}

/// Largest gap between the end of one panel and the start of the next (cyclically).
inline double closure_mismatch(std::span<const Panel> panels) {
  double worst = 0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& next = panels[(i + 1) % panels.size()];
    worst = std::max(worst, std::abs(panels[i].point(1.0) - next.point(0.0)));
  }
  return worst;
}

/// Positively oriented boundary of B_theta: the arc of radius sin(theta) and the
/// two tangent segments meeting at 1. For theta = pi/2 the segments vanish and
/// the boundary is the unit circle.
inline std::vector<Panel> stolz_boundary(double theta) {
  if (!(theta > 0.0 && theta <= pi / 2))
    throw BadParameters("Stolz angle must lie in (0, pi/2], got " + std::to_string(theta));
  const double s = std::sin(theta);
  const double a = pi / 2 - theta;
  std::vector<Panel> panels;
  panels.push_back(Panel::arc(0.0, s, a, 2 * pi - a));
  if (a > 0.0) {
    panels.push_back(Panel::segment(std::polar(s, -a), cplx{1.0, 0.0}));
    panels.push_back(Panel::segment(cplx{1.0, 0.0}, std::polar(s, a)));
  }
  return panels;
}

// ---------------------------------------------------------------------------
// Keyhole contours
// ---------------------------------------------------------------------------

/// Boundary of Omega_{eta,r} = B_eta union B_r(1).
///
/// For r < cos(eta) the panels are, in traversal order: the arc Gamma_1 of
/// radius sin(eta), the lower segment of Gamma_2, the arc Gamma_3 around 1 and
/// the upper segment of Gamma_2. The arcs keep open parameter ranges at the
/// corners; the corner points belong to the segments. For r >= cos(eta) the
/// boundary is that of B_{sin eta}(0) union B_r(1) and only two arcs remain.
struct KeyholeContour {
  double eta = 0;
  double r = 0;
  bool two_arc = false;
  std::vector<Panel> panels;

  double arclength() const { return total_length(panels); }
};

inline KeyholeContour keyhole_contour(double eta, double r) {
  if (!(eta > 0.0 && eta < pi / 2))
    throw BadParameters("keyhole eta must lie in (0, pi/2), got " + std::to_string(eta));
  if (!(r > 0.0 && r < 1.0))
    throw BadParameters("keyhole r must lie in (0, 1), got " + std::to_string(r));

  KeyholeContour c;
  c.eta = eta;
  c.r = r;
  const double s = std::sin(eta);
  const double co = std::cos(eta);
  if (r < co) {
    const double a = pi / 2 - eta;
    const cplx e_plus = std::polar(1.0, eta);
    const cplx e_minus = std::polar(1.0, -eta);
    c.panels.push_back(Panel::arc(0.0, s, a, 2 * pi - a));
    c.panels.push_back(Panel::segment(std::polar(s, -a), 1.0 - r * e_plus));
    c.panels.push_back(Panel::arc(1.0, r, -(pi - eta), pi - eta));
    c.panels.push_back(Panel::segment(1.0 - r * e_minus, std::polar(s, a)));
    // The analytic tangent point and 1 - cos(eta) e^{-i eta} agree up to
    // roundoff; pin the segment end to the arc start so the curve closes.
    c.panels.back().end = c.panels.front().point(0.0);
    c.panels[1].start = c.panels[0].point(1.0);
  } else {
    // Intersection of |z| = sin(eta) with |z - 1| = r.
    c.two_arc = true;
    const double x = (s * s - r * r + 1.0) / 2.0;
    const double y = std::sqrt(std::max(0.0, s * s - x * x));
    const double alpha = std::atan2(y, x);
    const double beta = std::atan2(y, x - 1.0);
    c.panels.push_back(Panel::arc(0.0, s, alpha, 2 * pi - alpha));
    c.panels.push_back(Panel::arc(1.0, r, -beta, beta));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// 16-point Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_16).
inline const std::array<std::array<double, 16>, 2>& gauss_legendre16() {
  static const auto rule = [] {
    constexpr int n = 16;
    std::array<std::array<double, 16>, 2> out{};
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      out[0][i] = -x;
      out[0][n - 1 - i] = x;
      out[1][i] = w;
      out[1][n - 1 - i] = w;
    }
    return out;
  }();
  return rule;
}

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(cplx v) { return std::abs(v); }
/// Frobenius norm: an upper bound for the operator norm, so agreement in it
/// implies agreement in the operator norm.
template <class Derived>
double quad_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <class V>
struct QuadratureResult {
  V value;
  double error_estimate = 0;
  long evaluations = 0;
  int max_depth = 0;
};

constexpr int kMaxHalvings = 14;

namespace detail {

template <class V, class F>
V gl16_rule(const Panel& p, double a, double b, F& f, long& evals) {
  const auto& rule = gauss_legendre16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  V acc = f(p.point(mid + half * rule[0][0]), p.derivative(mid + half * rule[0][0])) *
          (rule[1][0] * half);
  for (int i = 1; i < 16; ++i) {
    const double t = mid + half * rule[0][i];
    acc += f(p.point(t), p.derivative(t)) * (rule[1][i] * half);
  }
  evals += 16;
  return acc;
}

template <class V, class F>
V adapt(const Panel& p, double a, double b, const V& whole, double tol, int depth, F& f,
        QuadratureResult<V>& res) {
  const double mid = 0.5 * (a + b);
  V left = gl16_rule<V>(p, a, mid, f, res.evaluations);
  V right = gl16_rule<V>(p, mid, b, f, res.evaluations);
  V both = left + right;
  const double diff = quad_norm(V(both - whole));
  // Below ~50 ulps of the local value the difference is roundoff, not truncation.
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * quad_norm(both);
  if (diff <= std::max(tol, floor)) {
    res.error_estimate += diff;
    res.max_depth = std::max(res.max_depth, depth);
    return both;
  }
  if (depth >= kMaxHalvings)
    throw QuadratureStall("no agreement after " + std::to_string(kMaxHalvings) +
                          " halvings (difference " + std::to_string(diff) + ")");
  V lv = adapt<V>(p, a, mid, left, 0.5 * tol, depth + 1, f, res);
  V rv = adapt<V>(p, mid, b, right, 0.5 * tol, depth + 1, f, res);
  return V(lv + rv);
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre (order 16) over a panel list: each panel
/// interval is halved until the rule on the two halves agrees with the rule on
/// the whole to its share of `tol`. F(z, dz/dt) returns the integrand already
/// multiplied by whatever measure is wanted (dz, |dz|, ...). Panels are
/// summed in list order.
template <class V, class F>
QuadratureResult<V> integrate_panels(std::span<const Panel> panels, F&& f, double tol) {
  if (panels.empty()) throw BadParameters("empty panel list");
  if (!(tol > 0.0)) throw BadParameters("quadrature tolerance must be positive");
  QuadratureResult<V> res;
  const double panel_tol = tol / static_cast<double>(panels.size());
  bool first = true;
  for (const auto& p : panels) {
    V whole = detail::gl16_rule<V>(p, 0.0, 1.0, f, res.evaluations);
    V v = detail::adapt<V>(p, 0.0, 1.0, whole, panel_tol, 1, f, res);
    if (first) {
      res.value = v;
      first = false;
    } else {
      res.value += v;
    }
  }
  return res;
}

/// Contour integral of f(z) dz over a closed panel list.
template <class F>
auto contour_quadrature(std::span<const Panel> panels, F&& f, double tol) {
  using V = std::decay_t<decltype(f(cplx{}))>;
  auto integrand = [&f](cplx z, cplx dz) { return V(f(z) * dz); };
  return integrate_panels<V>(panels, integrand, tol);
}

template <class F>
auto contour_quadrature(const KeyholeContour& c, F&& f, double tol) {
  return contour_quadrature(std::span<const Panel>(c.panels), std::forward<F>(f), tol);
}

/// Arclength-measure integral of a real integrand g(z) |dz|.
template <class G>
QuadratureResult<double> arclength_quadrature(std::span<const Panel> panels, G&& g,
                                              double tol) {
  auto integrand = [&g](cplx z, cplx dz) { return double(g(z)) * std::abs(dz); };
  return integrate_panels<double>(panels, integrand, tol);
}

}  // namespace rittcalc
