#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "search.hpp"
#include "special.hpp"

namespace rittcalc {

// ---------------------------------------------------------------------------
// Riesz-Dunford evaluation
// ---------------------------------------------------------------------------

using ScalarFunction = std::function<cplx(cplx)>;

struct RieszDunfordOptions {
  double tol = 1e-10;
  /// Scale tol by max(1, ||f(T)||_F estimated from a first coarse pass).
  bool relative = true;
  /// Allowed deviation of the contour projection (1/2 pi i) int R(z,T) dz from I.
  double projection_tol = 1e-6;
  /// For p = z^m p0, integrate p0 only and multiply by T^m afterwards. Without
  /// this the integral of z^m p0(z) R(z,T) cancels down to roundoff whenever
  /// T^m is tiny.
  bool factor_monomial = true;
};

struct RieszDunfordResult {
  ComplexMatrix value;
  double error_estimate = 0;   // absolute, on f(T)
  double abs_tol = 0;          // tolerance the quadrature was run with
  double max_abs_f = 0;        // max |f| over quadrature nodes (estimate of the sup over the keyhole)
  double projection_residual = 0;
  long evaluations = 0;
  int max_depth = 0;
};

/// f(T) = (1/2 pi i) int f(z) R(z,T) dz over the keyhole boundary. The
/// resolvent alone is integrated on the same nodes; the result must be the
/// identity, otherwise part of the spectrum lies outside the contour.
inline RieszDunfordResult riesz_dunford(const ComplexMatrix& T, const ScalarFunction& f,
                                        double eta, double r,
                                        const RieszDunfordOptions& opt = {}) {
  require_operator(T);
  require_spectrum_in_disc(T);
  const KeyholeContour c = keyhole_contour(eta, r);
  const Eigen::Index n = T.rows();
  const cplx two_pi_i(0.0, 2.0 * pi);

  double max_f = 0.0;
  // Stacked integrand [f(z) R(z); R(z)] so both blocks share error control.
  auto integrand = [&](cplx z, cplx dz) -> ComplexMatrix {
    ComplexMatrix out(2 * n, n);
    ResolventResult R;
    try {
      R = resolvent(T, z);
    } catch (const SingularResolvent& e) {
      throw SpectrumTouchesContour(std::string("resolvent failed on the contour: ") + e.what());
    }
    const cplx fz = f(z);
    max_f = std::max(max_f, std::abs(fz));
    out.topRows(n) = (fz * dz) * R.value;
    out.bottomRows(n) = dz * R.value;
    return out;
  };

  double abs_tol = opt.tol;
  if (opt.relative) {
    // One GL16 pass per panel, no refinement, just to size the result.
    ComplexMatrix coarse = ComplexMatrix::Zero(2 * n, n);
    const auto& rule = gauss_legendre16();
    for (const auto& p : c.panels)
      for (int i = 0; i < 16; ++i) {
        const double t = 0.5 * (rule[0][i] + 1.0);
        coarse += integrand(p.point(t), p.derivative(t)) * (0.5 * rule[1][i]);
      }
    abs_tol = opt.tol * std::max(1.0, coarse.topRows(n).norm() / (2.0 * pi));
  }
  // The integral carries the factor 2 pi relative to f(T).
  const auto q = integrate_panels<ComplexMatrix>(std::span<const Panel>(c.panels), integrand,
                                                 abs_tol * 2.0 * pi);
  RieszDunfordResult res;
  res.value = q.value.topRows(n) / two_pi_i;
  ComplexMatrix proj = q.value.bottomRows(n) / two_pi_i;
  proj.diagonal().array() -= 1.0;
  res.projection_residual = op_norm2(proj);
  res.error_estimate = q.error_estimate / (2.0 * pi);
  res.abs_tol = abs_tol;
  res.max_abs_f = max_f;
  res.evaluations = q.evaluations;
  res.max_depth = q.max_depth;
  if (!(res.projection_residual <= opt.projection_tol))
    throw SpectrumTouchesContour("spectral projection differs from I by " +
                                 fmt17(res.projection_residual) +
                                 "; the spectrum is not enclosed by the contour");
  return res;
}

inline RieszDunfordResult riesz_dunford(const ComplexMatrix& T, const PolySpan& p, double eta,
                                        double r, const RieszDunfordOptions& opt = {}) {
  if (!opt.factor_monomial || p.m == 0)
    return riesz_dunford(T, ScalarFunction([&p](cplx z) { return p(z); }), eta, r, opt);
  const PolySpan p0 = p.cofactor();
  double max_p = 0.0;
  auto f = [&](cplx z) {
    const cplx v = p0(z);
    max_p = std::max(max_p, std::abs(ipow(z, p.m) * v));
    return v;
  };
  RieszDunfordResult res = riesz_dunford(T, ScalarFunction(f), eta, r, opt);
  const ComplexMatrix Tm = mat_pow(T, p.m);
  const double scale = op_norm2(Tm);
  res.value = Tm * res.value;
  res.error_estimate *= scale;
  res.abs_tol *= scale;
  res.max_abs_f = max_p;
  return res;
}

struct ContourChoice {
  double eta;
  double r;
};

/// eta halfway between the type angle and pi/2; r = tau/(n+1).
inline ContourChoice default_contour(double theta, int degree, double tau = 1.0) {
  if (!(tau > 0.0 && tau <= 1.0)) throw BadParameters("tau must lie in (0, 1]");
  double r = tau / (degree + 1.0);
  if (r >= 1.0) r = 0.5;
  return {(theta + pi / 2) / 2.0, r};
}

// ---------------------------------------------------------------------------
// Polynomial sup norms
// ---------------------------------------------------------------------------

namespace detail {

/// Sample |p| at z(t_k), then golden-section refine every discrete local maximum
/// within 5% of the best sample. `circular` joins the ends of the t range.
template <class Z>
double sampled_sup(const PolySpan& p, Z&& z_of, int count, bool circular, double t0, double t1) {
  std::vector<double> t(static_cast<std::size_t>(count));
  std::vector<double> v(t.size());
  for (int k = 0; k < count; ++k) {
    t[static_cast<std::size_t>(k)] =
        circular ? t0 + (t1 - t0) * k / count : t0 + (t1 - t0) * k / (count - 1);
    v[static_cast<std::size_t>(k)] = std::abs(p(z_of(t[static_cast<std::size_t>(k)])));
  }
  const double coarse = *std::max_element(v.begin(), v.end());
  double best = coarse;
  const double h = circular ? (t1 - t0) / count : (t1 - t0) / (count - 1);
  for (int k = 0; k < count; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const bool has_l = circular || k > 0;
    const bool has_r = circular || k + 1 < count;
    const double l = has_l ? v[(ku + t.size() - 1) % t.size()] : -1.0;
    const double r = has_r ? v[(ku + 1) % t.size()] : -1.0;
    if (v[ku] < l || v[ku] < r || v[ku] < 0.95 * coarse) continue;
    const double lo = has_l ? t[ku] - h : t[ku];
    const double hi = has_r ? t[ku] + h : t[ku];
    if (hi <= lo) continue;
    const auto g = golden_max([&](double s) { return std::abs(p(z_of(s))); }, lo, hi, 100, 1e-15);
    best = std::max(best, g.value);
  }
  return best;
}

}  // namespace detail

/// ||p||_{inf, D} from 16 (n+1) equispaced samples on the circle plus local refinement.
inline double sup_norm_disc(const PolySpan& p) {
  const int count = 16 * (p.n() + 1);
  return detail::sampled_sup(
      p, [](double a) { return std::polar(1.0, a); }, count, true, 0.0, 2 * pi);
}

/// Sup of |p| over the boundary of scale * B_alpha (maximum principle).
inline double sup_norm_stolz(const PolySpan& p, double alpha, double scale = 1.0) {
  if (!(scale > 0.0)) throw BadParameters("scale must be positive");
  const auto panels = stolz_boundary(alpha);
  const double total = total_length(panels);
  const int count = 16 * (p.n() + 1);
  double best = 0.0;
  if (panels.size() == 1)
    return detail::sampled_sup(
        p, [&](double a) { return std::polar(scale, a); }, count, true, 0.0, 2 * pi);
  for (const auto& pan : panels) {
    const int c = std::max(32, static_cast<int>(count * pan.length() / total) + 1);
    best = std::max(best, detail::sampled_sup(
                              p, [&](double t) { return scale * pan.point(t); }, c, false, 0.0,
                              1.0));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Bound formulas
// ---------------------------------------------------------------------------

/// (C_eta / 2 pi) * lemma2_bound.
inline double thm1_bound(double c_eta, const Lemma2Inputs& in) {
  return c_eta * lemma2_bound(in) / (2.0 * pi);
}

struct Thm2Constants {
  double a;
  double b;
};

/// a = 2e / (pi (1 - s)), b = -2 ln s + 6.
inline Thm2Constants thm2_constants(double s) {
  if (!(s > 0.0 && s < 1.0)) throw BadParameters("s must lie in (0, 1)");
  return {2.0 * std::numbers::e / (pi * (1.0 - s)), -2.0 * std::log(s) + 6.0};
}

/// a C (2 ln C + b + ln((n+1)/(m+1))).
inline double thm2_bound(double c_tr, int m, int n, double s = 0.5) {
  if (!(c_tr >= 1.0)) throw BadParameters("C(T) must be at least 1");
  if (m < 0 || n < m) throw BadParameters("need 0 <= m <= n");
  const auto k = thm2_constants(s);
  return k.a * c_tr * (2.0 * std::log(c_tr) + k.b + std::log((n + 1.0) / (m + 1.0)));
}

/// The power bound obtained from thm2_bound with m = n.
inline double power_bound(double c_tr, double s = 0.5) { return thm2_bound(c_tr, 0, 0, s); }

// ---------------------------------------------------------------------------
// Besov windows
// ---------------------------------------------------------------------------

/// num / 2^exp.
struct Dyadic {
  std::int64_t num = 0;
  int exp = 0;
  double value() const { return std::ldexp(static_cast<double>(num), -exp); }
};

/// Exact window coefficient hat W_n(k).
inline Dyadic window_coefficient(int n, long long k) {
  if (n < 0 || n > 60) throw BadParameters("window index out of range");
  if (n == 0) return {(k == 0 || k == 1) ? 1 : 0, 0};
  const long long lo = 1LL << (n - 1);
  const long long mid = 1LL << n;
  const long long hi = 1LL << (n + 1);
  if (k <= lo || k >= hi) return {0, 0};
  if (k <= mid) return {k - lo, n - 1};
  return {hi - k, n};
}

/// Sum over n of hat W_n(k) in exact arithmetic, as num / 2^exp with a common exponent.
inline Dyadic window_sum(long long k, int n_max) {
  Dyadic s{0, n_max};
  for (int n = 0; n <= n_max; ++n) {
    const Dyadic w = window_coefficient(n, k);
    s.num += w.num << (n_max - w.exp);
  }
  return s;
}

/// W_n as a polynomial over its full support [2^{n-1}, 2^{n+1}] (zero endpoints included).
inline PolySpan besov_window(int n) {
  if (n == 0) return PolySpan(0, {1.0, 1.0});
  const long long lo = 1LL << (n - 1);
  const long long hi = 1LL << (n + 1);
  std::vector<cplx> c;
  c.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long long k = lo; k <= hi; ++k) c.emplace_back(window_coefficient(n, k).value(), 0.0);
  return PolySpan(static_cast<int>(lo), std::move(c));
}

/// Number of windows with a nonzero coefficient in degrees 0..deg: n = 0 and
/// every n >= 1 with 2^{n-1} < deg.
inline int window_count(int deg) {
  int count = 1;
  while ((1LL << (count - 1)) < deg) ++count;
  return count;
}

/// W_n * f: coefficientwise product restricted to the window support.
inline PolySpan window_apply(int n, const PolySpan& f) {
  const long long lo = n == 0 ? 0 : 1LL << (n - 1);
  const long long hi = n == 0 ? 1 : 1LL << (n + 1);
  const long long a = std::max<long long>(lo, f.m);
  const long long b = std::min<long long>(hi, f.n());
  if (a > b) return PolySpan(0, {0.0});
  std::vector<cplx> c;
  for (long long k = a; k <= b; ++k)
    c.push_back(f.coefficient(static_cast<int>(k)) * window_coefficient(n, k).value());
  return PolySpan(static_cast<int>(a), std::move(c));
}

inline bool is_zero(const PolySpan& p) {
  for (const auto& c : p.coeffs)
    if (c != cplx{0.0, 0.0}) return false;
  return true;
}

/// ||f||_* = sum_n ||W_n * f||_{inf, D}.
inline double besov_norm(const PolySpan& f) {
  double s = 0.0;
  for (int n = 0; n < window_count(f.n()); ++n) {
    const PolySpan w = window_apply(n, f);
    if (!is_zero(w)) s += sup_norm_disc(w);
  }
  return s;
}

/// a C (2 ln C + b + ln 5) with the s = 1/2 constants.
inline double besov_constant(double c_tr) {
  const auto k = thm2_constants(0.5);
  return k.a * c_tr * (2.0 * std::log(c_tr) + k.b + std::log(5.0));
}

struct BesovResult {
  ComplexMatrix value;
  double besov_norm = 0;
  BoundReport report;
};

/// f(T) = sum_n (W_n * f)(T) and the check ||f(T)|| <= besov_constant(C) ||f||_*.
/// A precomputed ||f||_* may be passed to avoid recomputation across operators.
inline BesovResult besov_calculus(const ComplexMatrix& T, const PolySpan& f,
                                  const OperatorProfile& profile, double f_star = -1.0) {
  require_operator(T);
  BesovResult out;
  out.value = ComplexMatrix::Zero(T.rows(), T.cols());
  for (int n = 0; n < window_count(f.n()); ++n) {
    const PolySpan w = window_apply(n, f);
    if (!is_zero(w)) out.value += mat_poly(w, T);
  }
  out.besov_norm = f_star >= 0.0 ? f_star : besov_norm(f);
  const double lhs = op_norm2(out.value);
  const double rhs = besov_constant(profile.c_tr) * out.besov_norm;
  out.report = make_report("besov", lhs, rhs, 1e-9 * rhs,
                           Params().add("c_tr", profile.c_tr).add("degree", f.n())
                               .add("besov_norm", out.besov_norm));
  return out;
}

}  // namespace rittcalc
