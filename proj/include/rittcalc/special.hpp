#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace rittcalc {

/// Ei(s) = int_s^inf e^{-x}/x dx (usually written E_1). Power series below 1,
/// modified Lentz continued fraction from 1 on.
inline double exp_integral(double s) {
  if (!(s > 0.0)) throw DomainError("Ei needs s > 0, got " + std::to_string(s));
  if (std::isinf(s)) return 0.0;
  constexpr double eps = 1e-16;
  if (s < 1.0) {
    // E1(s) = -gamma - ln s - sum_{k>=1} (-s)^k / (k k!)
    double sum = 0.0;
    double term = 1.0;  // (-s)^k / k!
    for (int k = 1; k < 200; ++k) {
      term *= -s / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-15 * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(s) - sum;
  }
  constexpr double tiny = 1e-300;
  double b = s + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h * std::exp(-s);
  }
  throw NoConvergence("Ei continued fraction at s = " + std::to_string(s));
}

/// Lower side of the two-sided estimate: e^{-s} ln(1 + 2/s) / 2.
inline double ei_lower_estimate(double s) { return 0.5 * std::exp(-s) * std::log1p(2.0 / s); }
/// Upper side: e^{-s} ln(1 + 1/s).
inline double ei_upper_estimate(double s) { return std::exp(-s) * std::log1p(1.0 / s); }

struct Lemma2Inputs {
  double r = 0.1;
  int m = 0;
  double eta = std::numbers::pi / 3;

  void validate() const {
    if (!(r > 0.0 && r < 1.0)) throw BadParameters("r must lie in (0, 1), got " + std::to_string(r));
    if (m < 0) throw BadParameters("m must be nonnegative, got " + std::to_string(m));
    if (!(eta > 0.0 && eta < std::numbers::pi / 2))
      throw BadParameters("eta must lie in (0, pi/2), got " + std::to_string(eta));
  }
};

/// 4 sin^{m+1}(eta) ln(4/cos eta) + 4 Ei(r (m+1) cos(eta) / 2) + 2 pi (1+r)^m.
inline double lemma2_bound(const Lemma2Inputs& in) {
  in.validate();
  const double mp1 = in.m + 1.0;
  return 4.0 * std::pow(std::sin(in.eta), mp1) * std::log(4.0 / std::cos(in.eta)) +
         4.0 * exp_integral(in.r * mp1 * std::cos(in.eta) / 2.0) +
         2.0 * std::numbers::pi * std::pow(1.0 + in.r, in.m);
}

/// Closed majorant of lemma2_bound valid for r <= 1/(m+1):
/// -8 ln cos eta - 4 ln(r (m+1)) + 2 pi (1+r)^m + 12 ln 2.
inline double lemma2_simplified_bound(const Lemma2Inputs& in) {
  in.validate();
  if (in.r * (in.m + 1.0) > 1.0)
    throw BadParameters("simplified majorant needs r <= 1/(m+1)");
  return -8.0 * std::log(std::cos(in.eta)) - 4.0 * std::log(in.r * (in.m + 1.0)) +
         2.0 * std::numbers::pi * std::pow(1.0 + in.r, in.m) + 12.0 * std::numbers::ln2;
}

/// Per-panel values of int |z|^m / |z-1| |dz| over the keyhole boundary, in the
/// panel order of keyhole_contour. `tol` is relative to the size of the integral.
inline std::vector<double> keyhole_kernel_panels(const Lemma2Inputs& in, double tol) {
  in.validate();
  const KeyholeContour c = keyhole_contour(in.eta, in.r);
  auto g = [m = in.m](cplx z) { return std::pow(std::abs(z), m) / std::abs(z - 1.0); };
  std::vector<double> parts;
  parts.reserve(c.panels.size());
  // Scale from the crude bound max|g| * length; the integrand is positive.
  const double scale = std::pow(1.0 + in.r, in.m) / std::min(in.r, 1.0) * c.arclength();
  const double abs_tol = tol * std::max(1.0, scale) / static_cast<double>(c.panels.size());
  for (const auto& p : c.panels)
    parts.push_back(arclength_quadrature(std::span<const Panel>(&p, 1), g, abs_tol).value);
  return parts;
}

/// G(m, eta, r) = int_{boundary of the keyhole} |z|^m / |z - 1| |dz|.
inline double keyhole_kernel_integral(const Lemma2Inputs& in, double tol) {
  double total = 0.0;
  for (double v : keyhole_kernel_panels(in, tol)) total += v;
  return total;
}

}  // namespace rittcalc
