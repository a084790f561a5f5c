#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "report.hpp"

namespace rittcalc {

struct SquareNormResult {
  double value = 0;  // ||x||_T
  long terms_used = 0;
  bool converged = false;  // false: stopped at the term cap
  std::optional<double> closed_form;
};

struct SquareNormOptions {
  double eps = 1e-18;
  long max_terms = 1000000;
  int quiet_run = 100;
};

constexpr double kDivergenceFactor = 1e12;

/// Closed form of ||x||_T^2 for diagonal T: sum_j |x_j|^2 |1-l_j|^2 / (1-|l_j|^2)^2,
/// with l_j = 1 contributing 0. Empty when some |l_j| >= 1, l_j != 1.
inline std::optional<double> diagonal_square_norm2(const ComplexVector& lambda,
                                                   const ComplexVector& x) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const cplx l = lambda(j);
    if (l == cplx{1.0, 0.0} || x(j) == cplx{0.0, 0.0}) continue;
    const double a2 = std::norm(l);
    if (a2 >= 1.0) return std::nullopt;
    const double den = 1.0 - a2;
    s += std::norm(x(j)) * std::norm(1.0 - l) / (den * den);
  }
  return s;
}

/// ||x||_T = (sum_k k ||T^k x - T^{k-1} x||^2)^{1/2}. Partial sums stop after
/// `quiet_run` consecutive terms below eps (sum + eps), or at max_terms.
inline SquareNormResult square_norm(const ComplexMatrix& T, const ComplexVector& x,
                                    const SquareNormOptions& opt = {}) {
  require_operator(T);
  if (x.size() != T.rows()) throw ShapeError("vector length does not match the operator");
  const double x2 = x.squaredNorm();
  if (!(x2 > 0.0)) throw BadParameters("square_norm needs x != 0");

  const bool diag = is_diagonal(T);
  const ComplexVector lambda = T.diagonal();
  SquareNormResult out;
  double sum = 0.0;
  int quiet = 0;
  ComplexVector y = x;
  ComplexVector ty(x.size());
  long k = 1;
  for (; k <= opt.max_terms; ++k) {
    if (diag)
      ty = lambda.cwiseProduct(y);
    else
      ty.noalias() = T * y;
    const double term = static_cast<double>(k) * (ty - y).squaredNorm();
    sum += term;
    if (!(sum <= kDivergenceFactor * x2))
      throw Divergence("square-function partial sum exceeds 1e12 ||x||^2 at k = " +
                       std::to_string(k));
    quiet = term < opt.eps * (sum + opt.eps) ? quiet + 1 : 0;
    y.swap(ty);
    if (quiet >= opt.quiet_run) {
      out.converged = true;
      break;
    }
  }
  out.terms_used = std::min(k, opt.max_terms);
  out.value = std::sqrt(sum);
  if (diag) {
    if (auto cf = diagonal_square_norm2(lambda, x)) out.closed_form = std::sqrt(*cf);
  }
  return out;
}

/// Lemma bound factor: sqrt(2) c1 r^m sqrt(b + ln(1 - 1/(2 (m+1) ln r))), b = 1 + pb^2/c1^2.
inline double sfqe_lemma_bound(double pb, double c1, int m, double r) {
  if (!(c1 > 0.0)) throw DegenerateC1("c1 = 0 leaves b = 1 + Pb^2/c1^2 undefined");
  if (!(r > 0.0 && r < 1.0)) throw BadParameters("r must lie in (0, 1)");
  if (m < 0) throw BadParameters("m must be nonnegative");
  const double b = 1.0 + (pb * pb) / (c1 * c1);
  const double inner = 1.0 - 1.0 / (2.0 * (m + 1.0) * std::log(r));
  return std::sqrt(2.0) * c1 * std::pow(r, m) * std::sqrt(b + std::log(inner));
}

/// r = exp(-1/(2 (n-m+1))), the radius for which 1 - 1/(2(m+1) ln r) = (n+2)/(m+1).
inline double thm3_radius(int m, int n) { return std::exp(-1.0 / (2.0 * (n - m + 1.0))); }

/// sqrt(2) c1 K e^{1/2} sqrt(b + ln((n+2)/(m+1))): the third theorem's right
/// side without its non-explicit absolute factor.
inline double thm3_envelope(double K, double pb, double c1, int m, int n) {
  if (!(c1 > 0.0)) throw DegenerateC1("c1 = 0 leaves b = 1 + Pb^2/c1^2 undefined");
  if (m < 0 || n < m) throw BadParameters("need 0 <= m <= n");
  const double b = 1.0 + (pb * pb) / (c1 * c1);
  return std::sqrt(2.0) * c1 * K * std::exp(0.5) * std::sqrt(b + std::log((n + 2.0) / (m + 1.0)));
}

struct SqfeConstant {
  double value = 0;
  bool exact = false;  // false: sampled lower bound
};

/// Square-function constant K. Exact for diagonal T; otherwise the max of
/// ||x||_T over `samples` random unit vectors.
inline SqfeConstant sqfe_constant(const ComplexMatrix& T, int samples = 256,
                                  std::uint64_t seed = 1) {
  require_operator(T);
  SqfeConstant out;
  if (is_diagonal(T)) {
    out.exact = true;
    double best = 0.0;
    for (Eigen::Index j = 0; j < T.rows(); ++j) {
      const cplx l = T(j, j);
      if (l == cplx{1.0, 0.0}) continue;
      const double a2 = std::norm(l);
      if (a2 >= 1.0) throw Divergence("unimodular eigenvalue other than 1: K is infinite");
      best = std::max(best, std::abs(1.0 - l) / (1.0 - a2));
    }
    out.value = best;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < samples; ++s) {
    ComplexVector x(T.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(normal(rng), normal(rng));
    x /= x.norm();
    out.value = std::max(out.value, square_norm(T, x).value);
  }
  return out;
}

struct REquivalenceResult {
  double identity_residual = 0;  // max relative residual of the algebraic identity
  BoundReport report;
};

/// Checks (I-T) T^k x = (I-rT) T^k x - (1-r) T^{k+1} x for k = 1..100 and the
/// resulting comparison ||x||_{rT} <= ||x||_T + Pb ||x|| / (1 + r) at the
/// worst r of the list.
inline REquivalenceResult r_equivalence_check(const ComplexMatrix& T, const ComplexVector& x,
                                              const std::vector<double>& r_list, double pb) {
  require_operator(T);
  if (r_list.empty()) throw BadParameters("empty r list");
  REquivalenceResult out;
  ComplexVector tk = T * x;
  for (int k = 1; k <= 100; ++k) {
    const ComplexVector tk1 = T * tk;
    const ComplexVector lhs = tk - tk1;
    for (double r : r_list) {
      const ComplexVector rhs = (tk - r * tk1) - (1.0 - r) * tk1;
      const double scale = std::max({1e-300, tk.norm(), tk1.norm()});
      out.identity_residual = std::max(out.identity_residual, (lhs - rhs).norm() / scale);
    }
    tk = tk1;
  }
  const double base = square_norm(T, x).value;
  const double xn = x.norm();
  bool first = true;
  for (double r : r_list) {
    if (!(r > 0.0 && r < 1.0)) throw BadParameters("r must lie in (0, 1)");
    const double lhs = square_norm(ComplexMatrix(r * T), x).value;
    const double rhs = base + pb * xn / (1.0 + r);
    BoundReport rep = make_report("r_equivalence", lhs, rhs, 1e-9 * std::max(1.0, rhs),
                                  Params().add("r", r).add("pb", pb).add("norm_T", base));
    if (first || rep.margin < out.report.margin) out.report = rep;
    first = false;
  }
  return out;
}

}  // namespace rittcalc
