#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "search.hpp"

namespace rittcalc {

constexpr double kSpectralSlack = 1e-8;
constexpr int kDefaultGrid = 256;
constexpr long kDefaultNMax = 20000;

/// Gelfand upper bound min_j ||T^{2^j}||^{2^{-j}}, j <= 40, computed on a
/// renormalized squaring chain so large and small powers stay representable.
inline double spectral_radius_bound(const ComplexMatrix& T) {
  require_operator(T);
  if (is_diagonal(T)) return T.diagonal().cwiseAbs().maxCoeff();
  ComplexMatrix B = T;
  double log_scale = 0.0;  // log of the factor removed from B so far
  double best = std::numeric_limits<double>::infinity();
  double weight = 1.0;  // 2^{-j}
  for (int j = 0; j <= 40; ++j) {
    const double nrm = op_norm2(B);
    if (nrm == 0.0) return 0.0;
    best = std::min(best, std::exp(weight * (std::log(nrm) + log_scale)));
    B /= nrm;
    log_scale = 2.0 * (log_scale + std::log(nrm));
    B = B * B;
    weight *= 0.5;
  }
  return best;
}

inline double require_spectrum_in_disc(const ComplexMatrix& T) {
  const double rho = spectral_radius_bound(T);
  if (rho > 1.0 + kSpectralSlack)
    throw SpectrumOutsideDisc("spectral radius bound " + fmt17(rho) + " exceeds 1");
  return rho;
}

/// Ordering for argmax reductions: larger value, then smaller angle, then smaller radius.
struct Sample {
  cplx z{};
  double value = -1;
  double angle = 0;
  double radius = 0;
};

inline bool better_sample(const Sample& a, const Sample& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.angle != b.angle) return a.angle < b.angle;
  return a.radius < b.radius;
}

/// `grid` equispaced angles in (-pi, pi] plus +-2^{-j} pi for j = 1..32.
inline std::vector<double> ring_angles(int grid) {
  if (grid < 1) throw BadParameters("angular grid must be positive");
  std::vector<double> a;
  a.reserve(grid + 64);
  for (int k = 0; k < grid; ++k) {
    double phi = 2.0 * pi * k / grid;
    if (phi > pi) phi -= 2.0 * pi;
    a.push_back(phi);
  }
  double h = 0.5;
  for (int j = 1; j <= 32; ++j, h *= 0.5) {
    a.push_back(h * pi);
    a.push_back(-h * pi);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

struct ConstantEstimate {
  double value = 1.0;
  cplx argmax{};
  double refinement_delta = 0;  // relative change between the last two refinement levels
  bool converged = true;
  long samples = 0;
};

namespace detail {

template <class G>
std::vector<Sample> sweep_rings(const std::vector<double>& radii, const std::vector<double>& angles,
                                G&& g) {
  std::vector<Sample> out(radii.size() * angles.size());
  parallel_for(out.size(), [&](std::size_t idx) {
    const double rad = radii[idx / angles.size()];
    const double phi = angles[idx % angles.size()];
    const cplx z = std::polar(rad, phi);
    out[idx] = Sample{z, g(z), phi, rad};
  });
  return out;
}

/// Indices of ring-wise circular local maxima, best first, at most `keep`.
inline std::vector<std::size_t> top_local_maxima(const std::vector<Sample>& s, std::size_t per_ring,
                                                 std::size_t keep) {
  std::vector<std::size_t> idx;
  for (std::size_t base = 0; base < s.size(); base += per_ring) {
    for (std::size_t i = 0; i < per_ring; ++i) {
      const double v = s[base + i].value;
      const double l = s[base + (i + per_ring - 1) % per_ring].value;
      const double r = s[base + (i + 1) % per_ring].value;
      if (v >= l && v >= r) idx.push_back(base + i);
    }
  }
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return better_sample(s[a], s[b]); });
  if (idx.size() > keep) idx.resize(keep);
  return idx;
}

inline double neighbour_angle(const std::vector<double>& angles, std::size_t i, int dir) {
  const std::size_t n = angles.size();
  if (dir < 0) return i == 0 ? angles[n - 1] - 2 * pi : angles[i - 1];
  return i + 1 == n ? angles[0] + 2 * pi : angles[i + 1];
}

inline double wrap_angle(double phi) {
  while (phi > pi) phi -= 2 * pi;
  while (phi <= -pi) phi += 2 * pi;
  return phi;
}

}  // namespace detail

/// Shared ring-sweep estimator for sup_{|z|>1} g(z): coarse sweep, then
/// golden-section refinement in angle (and optionally in log radius) around
/// the best local maxima. The far-field value 1 is included.
template <class G>
ConstantEstimate ring_sup(const std::vector<double>& radii, int grid, G&& g, bool refine_radius) {
  const auto angles = ring_angles(grid);
  const auto samples = detail::sweep_rings(radii, angles, g);
  Sample best{cplx{}, 1.0, 0.0, std::numeric_limits<double>::infinity()};
  for (const auto& s : samples)
    if (better_sample(s, best)) best = s;

  ConstantEstimate est;
  est.samples = static_cast<long>(samples.size());
  double early_best = best.value;
  const auto peaks = detail::top_local_maxima(samples, angles.size(), 8);
  for (std::size_t p : peaks) {
    const std::size_t ring = p / angles.size();
    const std::size_t ai = p % angles.size();
    double rad = radii[ring];
    double phi = angles[ai];
    double lo = detail::neighbour_angle(angles, ai, -1);
    double hi = detail::neighbour_angle(angles, ai, +1);
    Sample local = samples[p];
    double local_early = local.value;
    const int rounds = refine_radius ? 3 : 1;
    for (int round = 0; round < rounds; ++round) {
      auto fa = [&](double a) { return g(std::polar(rad, a)); };
      const auto ga = golden_max(fa, lo, hi);
      if (ga.value > local.value) {
        phi = ga.x;
        local = Sample{std::polar(rad, phi), ga.value, detail::wrap_angle(phi), rad};
      }
      if (round == 0) local_early = std::max(local_early, ga.early_value);
      if (!refine_radius) break;
      // log-radius direction between the neighbouring rings
      const double lr_lo = std::log(radii[ring == 0 ? 0 : ring - 1] - 1.0);
      const double lr_hi = std::log(radii[ring + 1 == radii.size() ? ring : ring + 1] - 1.0);
      if (lr_hi > lr_lo) {
        auto fr = [&](double lr) { return g(std::polar(1.0 + std::exp(lr), phi)); };
        const auto gr = golden_max(fr, lr_lo, lr_hi);
        if (gr.value > local.value) {
          rad = 1.0 + std::exp(gr.x);
          local = Sample{std::polar(rad, phi), gr.value, detail::wrap_angle(phi), rad};
        }
      }
      const double span = 0.25 * (hi - lo);
      lo = phi - span;
      hi = phi + span;
    }
    if (better_sample(local, best)) best = local;
    early_best = std::max(early_best, local_early);
  }
  est.value = best.value;
  est.argmax = best.z;
  est.refinement_delta = (best.value - early_best) / best.value;
  est.converged = est.refinement_delta < 1e-4;
  return est;
}

inline std::vector<double> tr_radii() { return {1.0 + 1e-6, 1.0 + 1e-4, 1.0 + 1e-2}; }

inline std::vector<double> kreiss_radii(int count = 22) {
  std::vector<double> r;
  for (int j = 0; j < count; ++j) r.push_back(1.0 + std::pow(10.0, -6.0 + 7.0 * j / (count - 1)));
  return r;
}

/// C(T) = sup_{|z|>1} ||(z-1) R(z,T)||, estimated on rings just outside the circle.
inline ConstantEstimate tadmor_ritt_constant(const ComplexMatrix& T, int grid = kDefaultGrid) {
  require_operator(T);
  require_spectrum_in_disc(T);
  const bool diag = is_diagonal(T);
  return ring_sup(
      tr_radii(), grid, [&](cplx z) { return std::abs(z - 1.0) * resolvent_norm(T, z, diag); },
      false);
}

/// Kreiss constant sup_{|z|>1} (|z|-1) ||R(z,T)|| over log-spaced rings 1 + [1e-6, 10].
inline ConstantEstimate kreiss_constant(const ComplexMatrix& T, int grid = kDefaultGrid) {
  require_operator(T);
  require_spectrum_in_disc(T);
  const bool diag = is_diagonal(T);
  return ring_sup(
      kreiss_radii(), grid, [&](cplx z) { return (std::abs(z) - 1.0) * resolvent_norm(T, z, diag); },
      true);
}

/// Type angle arccos(1/C).
inline double type_angle(double c_tr) { return std::acos(1.0 / std::max(1.0, c_tr)); }

/// C_eta(T): sup of ||(z-1) R(z,T)|| over the boundary of B_eta, which by the
/// maximum principle equals the sup over the complement of its closure.
inline ConstantEstimate sector_constant(const ComplexMatrix& T, double eta, double theta,
                                        int grid = kDefaultGrid) {
  require_operator(T);
  if (!(eta <= pi / 2)) throw BadParameters("eta must not exceed pi/2");
  if (!(eta > theta))
    throw EtaTooSmall("eta = " + fmt17(eta) + " does not exceed the type angle " + fmt17(theta));
  const bool diag = is_diagonal(T);
  auto g = [&](cplx z) { return std::abs(z - 1.0) * resolvent_norm(T, z, diag); };

  // Parametrize the boundary by (panel, t); z = 1 itself is excluded.
  struct Point {
    int panel;
    double t;
  };
  const auto panels = stolz_boundary(eta);
  std::vector<Point> pts;
  for (int k = 0; k < grid; ++k) pts.push_back({0, (k + 0.5) / grid});
  if (panels.size() == 1) {
    // the unit circle: add geometric angles near 1 on both sides
    double h = 0.5;
    for (int j = 1; j <= 40; ++j, h *= 0.5) {
      pts.push_back({0, h / 2});
      pts.push_back({0, 1.0 - h / 2});
    }
  } else {
    for (int seg = 1; seg <= 2; ++seg) {
      for (int k = 0; k < grid / 4; ++k) pts.push_back({seg, (k + 0.5) / (grid / 4)});
      double h = 0.5;
      for (int j = 1; j <= 40; ++j, h *= 0.5)
        pts.push_back({seg, seg == 1 ? 1.0 - h : h});  // distance h * length from 1
    }
  }
  auto z_of = [&](const Point& p) {
    return panels[static_cast<std::size_t>(p.panel)].point(p.t);
  };
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = g(z_of(pts[i])); });

  // Refine around the best samples of each panel by golden section in t.
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    return a < b;
  });
  ConstantEstimate est;
  est.samples = static_cast<long>(pts.size());
  est.value = vals[order[0]];
  est.argmax = z_of(pts[order[0]]);
  double early = est.value;
  for (std::size_t q = 0; q < std::min<std::size_t>(6, order.size()); ++q) {
    const Point p = pts[order[q]];
    double lo = 0.0, hi = 1.0;
    for (const auto& o : pts) {
      if (o.panel != p.panel) continue;
      if (o.t < p.t) lo = std::max(lo, o.t);
      if (o.t > p.t) hi = std::min(hi, o.t);
    }
    const auto& pan = panels[static_cast<std::size_t>(p.panel)];
    auto f = [&](double t) {
      const cplx z = pan.point(t);
      if (std::abs(z - 1.0) == 0.0) return 0.0;
      return g(z);
    };
    const auto gr = golden_max(f, lo, hi);
    early = std::max(early, gr.early_value);
    if (gr.value > est.value) {
      est.value = gr.value;
      est.argmax = pan.point(gr.x);
    }
  }
  est.refinement_delta = (est.value - early) / est.value;
  est.converged = est.refinement_delta < 1e-4;
  return est;
}

struct DiscreteCharacteristics {
  double pb = 0;   // max_{1<=n<=N} ||T^n||
  double c1 = 0;   // max_{1<=n<=N} n ||T^n - T^{n-1}||
  bool converged = false;
  long n_used = 0;
};

constexpr double kPowerOverflow = 1e12;

/// Exact sup_n over all n >= 1 for diagonal T, eigenvalue by eigenvalue.
/// Unimodular eigenvalues other than 1 make c1 unbounded; those are scanned up
/// to n_max and reported as unconverged.
inline DiscreteCharacteristics diagonal_characteristics(const ComplexVector& lambda, long n_max) {
  DiscreteCharacteristics out;
  out.converged = true;
  out.n_used = 0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const cplx l = lambda(j);
    const double rho = std::abs(l);
    if (rho > 1.0) throw Overflow("eigenvalue of modulus " + fmt17(rho) + " > 1: powers diverge");
    out.pb = std::max(out.pb, rho);
    const double gap = std::abs(1.0 - l);
    if (gap == 0.0) continue;
    if (rho == 1.0) {
      out.c1 = std::max(out.c1, static_cast<double>(n_max) * gap);
      out.converged = false;
      out.n_used = n_max;
      continue;
    }
    if (rho == 0.0) {
      out.c1 = std::max(out.c1, gap);  // n = 1: T^1 - T^0 = -I on this coordinate
      continue;
    }
    // n rho^{n-1} peaks at n* = -1/ln rho; check the integers around it.
    const double lr = std::log(rho);
    const double nstar = -1.0 / lr;
    double peak = 0.0;
    for (double n : {std::floor(nstar), std::ceil(nstar), 1.0}) {
      if (n < 1.0) continue;
      peak = std::max(peak, n * std::exp((n - 1.0) * lr));
    }
    out.c1 = std::max(out.c1, gap * peak);
    out.n_used = std::max(out.n_used, static_cast<long>(std::ceil(nstar)));
  }
  return out;
}

/// Pb and c1 by scanning powers. The scan stops once both sequences have stayed
/// below half their running maxima for 50 consecutive steps, or once T^n stops
/// changing, or at n_max (then converged = false).
inline DiscreteCharacteristics discrete_characteristics(const ComplexMatrix& T,
                                                        long n_max = kDefaultNMax) {
  require_operator(T);
  if (n_max < 1) throw BadParameters("n_max must be positive");
  if (is_diagonal(T)) return diagonal_characteristics(T.diagonal(), n_max);

  DiscreteCharacteristics out;
  const Eigen::Index d = T.rows();
  ComplexMatrix prev = ComplexMatrix::Identity(d, d);
  ComplexMatrix cur = T;
  int quiet = 0;
  for (long n = 1; n <= n_max; ++n) {
    const double pn = op_norm2(cur);
    if (!(pn <= kPowerOverflow))
      throw Overflow("||T^" + std::to_string(n) + "|| = " + fmt17(pn) + " exceeds 1e12");
    const ComplexMatrix diff = cur - prev;
    const double cn = static_cast<double>(n) * op_norm2(diff);
    out.pb = std::max(out.pb, pn);
    out.c1 = std::max(out.c1, cn);
    out.n_used = n;
    if (diff.cwiseAbs().maxCoeff() == 0.0) {
      // T^n = T^{n-1}: every later power is the same matrix.
      out.converged = true;
      return out;
    }
    quiet = (pn < 0.5 * out.pb && cn < 0.5 * out.c1) ? quiet + 1 : 0;
    if (quiet >= 50) {
      out.converged = true;
      return out;
    }
    prev.swap(cur);
    cur = prev * T;
  }
  return out;
}

struct OperatorProfile {
  double c_tr = 1;
  double c_kreiss = 1;
  double theta = 0;
  double pb = 0;
  double c1 = 0;
  double spectral_radius_bound = 0;
  int grid_size = kDefaultGrid;
  long n_max = kDefaultNMax;
  cplx argmax_z{};
  bool pb_converged = false;
  double tr_refinement_delta = 0;
  double kreiss_refinement_delta = 0;
};

inline OperatorProfile profile_operator(const ComplexMatrix& T, int grid = kDefaultGrid,
                                        long n_max = kDefaultNMax) {
  require_operator(T);
  OperatorProfile p;
  p.grid_size = grid;
  p.n_max = n_max;
  p.spectral_radius_bound = require_spectrum_in_disc(T);
  const auto tr = tadmor_ritt_constant(T, grid);
  const auto kr = kreiss_constant(T, grid);
  p.c_tr = tr.value;
  p.argmax_z = tr.argmax;
  p.tr_refinement_delta = tr.refinement_delta;
  // |z-1| >= |z|-1, so the TR function at the Kreiss maximizer dominates it.
  if (kr.argmax != cplx{}) {
    const double at_kreiss = std::abs(kr.argmax - 1.0) * resolvent_norm(T, kr.argmax, is_diagonal(T));
    if (at_kreiss > p.c_tr) {
      p.c_tr = at_kreiss;
      p.argmax_z = kr.argmax;
    }
  }
  p.c_kreiss = kr.value;
  p.kreiss_refinement_delta = kr.refinement_delta;
  p.theta = type_angle(p.c_tr);
  const auto dc = discrete_characteristics(T, n_max);
  p.pb = dc.pb;
  p.c1 = dc.c1;
  p.pb_converged = dc.converged;
  return p;
}

/// Spijker: Pb(T) <= e C_Kreiss(T) N.
inline BoundReport spijker_check(double pb, double c_kreiss, int N) {
  return make_report("spijker", pb, std::numbers::e * c_kreiss * N, 0.0,
                     Params().add("N", N).add("c_kreiss", c_kreiss));
}

/// b(X) = max over contiguous ranges [l, k] of ||X E_{l..k} X^{-1}||.
inline double basis_constant(const ComplexMatrix& X) {
  require_operator(X, "eigenvector matrix");
  Eigen::PartialPivLU<ComplexMatrix> lu(X);
  const ComplexMatrix Xinv = lu.inverse();
  const Eigen::Index n = X.cols();
  double b = 0.0;
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index k = l; k < n; ++k) {
      const Eigen::Index len = k - l + 1;
      b = std::max(b, op_norm2(X.middleCols(l, len) * Xinv.middleRows(l, len)));
    }
  return b;
}

/// Nikolski: Pb(T) <= 2 pi C_Kreiss(T) N^{1 - eps} with eps = 0.32 / b(X)^2, for
/// T = X diag(eigvals) X^{-1} with unimodular spectrum. Pb is scanned over
/// n <= n_max, so the left side is a lower estimate of the true Pb.
inline BoundReport nikolski_check(const ComplexVector& eigvals, const ComplexMatrix& X,
                                  double c_kreiss, long n_max = 512) {
  require_operator(X, "eigenvector matrix");
  if (eigvals.size() != X.cols()) throw ShapeError("eigenvalue count does not match the basis");
  for (Eigen::Index j = 0; j < eigvals.size(); ++j)
    if (std::abs(std::abs(eigvals(j)) - 1.0) > 1e-10)
      throw SpectrumNotUnimodular("|lambda_" + std::to_string(j) + "| = " +
                                  fmt17(std::abs(eigvals(j))));
  const double kappa = condition_number(X);
  if (!std::isfinite(kappa) || kappa > 1e14) throw ShapeError("eigenvectors do not form a basis");
  const double b = basis_constant(X);
  const double eps = 0.32 / (b * b);
  const Eigen::Index N = X.cols();

  Eigen::PartialPivLU<ComplexMatrix> lu(X);
  const ComplexMatrix Xinv = lu.inverse();
  double pb = 0.0;
  ComplexVector pw = eigvals;
  for (long n = 1; n <= n_max; ++n) {
    pb = std::max(pb, op_norm2(X * pw.asDiagonal() * Xinv));
    pw = pw.cwiseProduct(eigvals);
  }
  const double rhs = 2.0 * pi * c_kreiss * std::pow(static_cast<double>(N), 1.0 - eps);
  return make_report("nikolski", pb, rhs, 0.0,
                     Params().add("N", static_cast<int>(N)).add("b", b).add("eps", eps)
                         .add("c_kreiss", c_kreiss).add("n_max", static_cast<long long>(n_max)));
}

}  // namespace rittcalc
