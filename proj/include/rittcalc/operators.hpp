#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fcalc.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace rittcalc {

enum class OperatorKind { multiplier, jordan, cayley, random_tr, diagonal, unimodular };

inline const char* kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::multiplier: return "multiplier";
    case OperatorKind::jordan: return "jordan";
    case OperatorKind::cayley: return "cayley";
    case OperatorKind::random_tr: return "random_tr";
    case OperatorKind::diagonal: return "diagonal";
    case OperatorKind::unimodular: return "unimodular";
  }
  return "?";
}

/// Eigenvalues and eigenvector columns, when known by construction.
struct EigenData {
  ComplexVector values;
  ComplexMatrix vectors;
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::diagonal;
  int N = 1;
  cplx lambda{0.5, 0.0};            // jordan
  double theta = 0.7853981633974483;  // random_tr
  double cond_cap = 1.0;            // random_tr, unimodular (skew)
  std::uint64_t seed = 1;
  std::vector<cplx> diagonal;       // diagonal
};

struct Operator {
  std::string name;
  OperatorSpec spec;
  ComplexMatrix matrix;
  std::optional<EigenData> eigen;
};

/// Independent stream for item `index` under `seed` (splitmix64 of the pair), so
/// that candidate lists are prefix-stable.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

inline ComplexMatrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = scale * cplx(normal(rng), normal(rng));
  return g;
}

/// diag(1 - 2^{-1}, ..., 1 - 2^{-N}).
inline ComplexMatrix multiplier_operator(int N) {
  if (N < 1) throw BadParameters("multiplier size must be positive");
  if (N > 64) throw PrecisionLoss("1 - 2^{-N} is 1 in double precision well before N = " +
                                  std::to_string(N));
  ComplexMatrix T = ComplexMatrix::Zero(N, N);
  for (int k = 1; k <= N; ++k) T(k - 1, k - 1) = 1.0 - std::ldexp(1.0, -k);
  return T;
}

inline ComplexMatrix jordan_block(cplx lambda, int n) {
  if (n < 1) throw BadParameters("Jordan block size must be positive");
  ComplexMatrix J = ComplexMatrix::Zero(n, n);
  J.diagonal().setConstant(lambda);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = 1.0;
  return J;
}

/// (I - A)(A + I)^{-1} = -(I - A) R(-1, A).
inline ComplexMatrix cayley(const ComplexMatrix& A) {
  require_operator(A);
  ComplexMatrix IminusA = -A;
  IminusA.diagonal().array() += 1.0;
  return -(IminusA * resolvent(A, cplx{-1.0, 0.0}).value);
}

/// S D S^{-1} with D sampled uniformly in 0.98 B_theta and S = I + rho G, rho
/// the largest (by bisection) value keeping cond(S) <= cond_cap.
inline Operator random_tr(int N, double theta, double cond_cap, std::uint64_t seed) {
  if (N < 1) throw BadParameters("dimension must be positive");
  if (!(theta > 0.0 && theta < pi / 2)) throw BadParameters("theta must lie in (0, pi/2)");
  if (!(cond_cap >= 1.0)) throw BadParameters("condition cap must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const StolzDomain dom{theta};
  ComplexVector d(N);
  for (int i = 0; i < N; ++i) {
    cplx w;
    do {
      w = cplx(unif(rng), unif(rng));
    } while (!stolz_contains(dom, w));
    d(i) = 0.98 * w;
  }
  const ComplexMatrix G = gaussian_matrix(rng, N, N, 1.0 / std::sqrt(2.0 * N));
  const ComplexMatrix I = ComplexMatrix::Identity(N, N);
  double rho = 0.0;
  if (cond_cap > 1.0) {
    double lo = 0.0, hi = 1.0;
    while (condition_number(I + hi * G) <= cond_cap && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (condition_number(I + mid * G) <= cond_cap)
        lo = mid;
      else
        hi = mid;
    }
    rho = lo;
  }
  const ComplexMatrix S = I + rho * G;
  Eigen::PartialPivLU<ComplexMatrix> lu(S);
  Operator op;
  op.name = "random_tr(" + std::to_string(N) + ")";
  op.spec.kind = OperatorKind::random_tr;
  op.spec.N = N;
  op.spec.theta = theta;
  op.spec.cond_cap = cond_cap;
  op.spec.seed = seed;
  op.matrix = S * d.asDiagonal() * lu.inverse();
  op.eigen = EigenData{d, S};
  return op;
}

/// X diag(e^{i phi_j}) X^{-1} with X = I + skew G / sqrt(2N) and uniform phases.
inline Operator unimodular_operator(int N, double skew, std::uint64_t seed) {
  if (N < 1) throw BadParameters("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-pi, pi);
  ComplexVector d(N);
  for (int i = 0; i < N; ++i) d(i) = std::polar(1.0, phase(rng));
  const ComplexMatrix X =
      ComplexMatrix::Identity(N, N) + gaussian_matrix(rng, N, N, skew / std::sqrt(2.0 * N));
  Eigen::PartialPivLU<ComplexMatrix> lu(X);
  Operator op;
  op.name = "unimodular(" + std::to_string(N) + ")";
  op.spec.kind = OperatorKind::unimodular;
  op.spec.N = N;
  op.spec.cond_cap = skew;
  op.spec.seed = seed;
  op.matrix = X * d.asDiagonal() * lu.inverse();
  op.eigen = EigenData{d, X};
  return op;
}

inline Operator diagonal_operator(const std::vector<cplx>& values, std::string name = "diagonal") {
  if (values.empty()) throw BadParameters("empty diagonal");
  const auto n = static_cast<Eigen::Index>(values.size());
  Operator op;
  op.name = std::move(name);
  op.spec.kind = OperatorKind::diagonal;
  op.spec.N = static_cast<int>(n);
  op.spec.diagonal = values;
  op.matrix = ComplexMatrix::Zero(n, n);
  ComplexVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = op.matrix(i, i) = values[static_cast<std::size_t>(i)];
  op.eigen = EigenData{d, ComplexMatrix::Identity(n, n)};
  return op;
}

/// Random Hermitian positive definite matrix with eigenvalues in [lo, hi].
inline ComplexMatrix random_hpd(int N, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix G = gaussian_matrix(rng, N, N);
  Eigen::HouseholderQR<ComplexMatrix> qr(G);
  const ComplexMatrix Q = qr.householderQ();
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd ev(N);
  for (int i = 0; i < N; ++i) ev(i) = unif(rng);
  ComplexMatrix A = Q * ev.cast<cplx>().asDiagonal() * Q.adjoint();
  return 0.5 * (A + A.adjoint());
}

inline Operator build_operator(const OperatorSpec& s) {
  switch (s.kind) {
    case OperatorKind::multiplier: {
      Operator op;
      op.name = "multiplier(" + std::to_string(s.N) + ")";
      op.spec = s;
      op.matrix = multiplier_operator(s.N);
      op.eigen = EigenData{op.matrix.diagonal(), ComplexMatrix::Identity(s.N, s.N)};
      return op;
    }
    case OperatorKind::jordan: {
      Operator op;
      op.name = "jordan(" + fmt_short(s.lambda.real()) + "," + std::to_string(s.N) + ")";
      op.spec = s;
      op.matrix = jordan_block(s.lambda, s.N);
      return op;
    }
    case OperatorKind::cayley: {
      Operator op;
      op.name = "cayley_hpd(" + std::to_string(s.N) + ")";
      op.spec = s;
      op.matrix = cayley(random_hpd(s.N, 0.1, 10.0, s.seed));
      return op;
    }
    case OperatorKind::random_tr: return random_tr(s.N, s.theta, s.cond_cap, s.seed);
    case OperatorKind::unimodular: return unimodular_operator(s.N, s.cond_cap, s.seed);
    case OperatorKind::diagonal: {
      Operator op = diagonal_operator(s.diagonal);
      op.spec = s;
      return op;
    }
  }
  throw BadParameters("unknown operator kind");
}

/// The standard test family used by the verification suites.
inline std::vector<Operator> factory_suite() {
  std::vector<OperatorSpec> specs;
  OperatorSpec s;
  s = {};
  s.kind = OperatorKind::multiplier;
  s.N = 16;
  specs.push_back(s);
  s.N = 64;
  specs.push_back(s);
  s = {};
  s.kind = OperatorKind::jordan;
  s.lambda = 0.5;
  s.N = 4;
  specs.push_back(s);
  s.lambda = 0.7;
  s.N = 3;
  specs.push_back(s);
  s = {};
  s.kind = OperatorKind::cayley;
  s.N = 8;
  s.seed = 7;
  specs.push_back(s);
  s = {};
  s.kind = OperatorKind::random_tr;
  s.N = 8;
  s.theta = pi / 4;
  s.cond_cap = 5.0;
  s.seed = 1;
  specs.push_back(s);
  s.N = 12;
  s.theta = pi / 3;
  s.cond_cap = 20.0;
  s.seed = 2;
  specs.push_back(s);
  s = {};
  s.kind = OperatorKind::diagonal;
  s.diagonal = {1.0, 0.5, cplx(0.25, 0.25), -0.3};
  s.N = 4;
  specs.push_back(s);

  std::vector<Operator> ops;
  for (const auto& sp : specs) ops.push_back(build_operator(sp));
  return ops;
}

// ---------------------------------------------------------------------------
// Searches
// ---------------------------------------------------------------------------

/// Candidate i (i >= 1) of the C(T,m,n) search; candidate 0 is z^m.
inline PolySpan ctm_candidate(int m, int n, std::uint64_t seed, std::uint64_t i) {
  if (i == 0) return PolySpan::monomial(m);
  auto rng = substream(seed, i);
  const int width = n - m + 1;
  std::uniform_int_distribution<int> pick_deg(m, n);
  switch (i % 3) {
    case 1: {  // complex Gaussian coefficients over the whole span
      std::normal_distribution<double> normal;
      std::vector<cplx> c(static_cast<std::size_t>(width));
      for (auto& v : c) v = cplx(normal(rng), normal(rng));
      return PolySpan(m, std::move(c));
    }
    case 2: {  // a dyadic window shifted into [m, n]
      // window j >= 1 spans 3 * 2^{j-1} degrees; take the widest that fits
      int top = 0;
      while (top < 20 && (3LL << top) <= width - 1) ++top;
      std::uniform_int_distribution<int> pick_w(0, top);
      const PolySpan w = besov_window(pick_w(rng));
      const int span = w.n() - w.m;
      std::uniform_int_distribution<int> pick_shift(m, std::max(m, n - span));
      const int shift = pick_shift(rng);
      std::vector<cplx> c;
      for (int k = 0; k <= std::min(span, n - shift); ++k) c.push_back(w.coeffs[static_cast<std::size_t>(k)]);
      return PolySpan(shift, std::move(c));
    }
    default:
      return PolySpan::monomial(pick_deg(rng));
  }
}

/// Lower bound for C(T,m,n) = sup{||p(T)|| : p in H^inf[m,n], ||p||_D <= 1}.
inline double ctm_search(const ComplexMatrix& T, int m, int n, int budget, std::uint64_t seed) {
  require_operator(T);
  if (m < 0 || n < m) throw BadParameters("need 0 <= m <= n");
  if (n - m > 4096) throw BadParameters("n - m must not exceed 4096");
  if (budget < 1) throw BadParameters("budget must be positive");
  std::vector<double> vals(static_cast<std::size_t>(budget), 0.0);
  parallel_for(vals.size(), [&](std::size_t i) {
    const PolySpan p = ctm_candidate(m, n, seed, i);
    const double s = sup_norm_disc(p);
    if (s > 0.0) vals[i] = op_norm2(mat_poly(p, T)) / s;
  });
  return *std::max_element(vals.begin(), vals.end());
}

/// Lower bound for sup ||V diag(alpha) V^{-1}|| over |alpha_k| <= 1: alpha = 1,
/// random unimodular alpha and, alternately, alpha aligned to a random dual
/// pair (x, y) so every alpha_k c_k (V^* y)_k is a nonnegative real.
inline double uniform_basis_constant(const ComplexMatrix& V, int budget, std::uint64_t seed) {
  require_operator(V, "basis");
  Eigen::PartialPivLU<ComplexMatrix> lu(V);
  const ComplexMatrix Vinv = lu.inverse();
  const Eigen::Index n = V.cols();
  auto value = [&](const ComplexVector& alpha) { return op_norm2(V * alpha.asDiagonal() * Vinv); };
  double best = value(ComplexVector::Ones(n));
  for (int i = 1; i < budget; ++i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    ComplexVector alpha(n);
    if (i % 2 == 1) {
      std::uniform_real_distribution<double> phase(-pi, pi);
      for (Eigen::Index k = 0; k < n; ++k) alpha(k) = std::polar(1.0, phase(rng));
    } else {
      const ComplexMatrix xy = gaussian_matrix(rng, n, 2);
      const ComplexVector c = Vinv * xy.col(0);
      const ComplexVector w = V.adjoint() * xy.col(1);
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx t = c(k) * std::conj(w(k));
        alpha(k) = std::abs(t) > 0.0 ? std::conj(t) / std::abs(t) : cplx{1.0, 0.0};
      }
    }
    best = std::max(best, value(alpha));
  }
  return best;
}

}  // namespace rittcalc
