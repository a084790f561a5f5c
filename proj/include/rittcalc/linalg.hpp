#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include "errors.hpp"
#include "poly.hpp"

namespace rittcalc {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Throws ShapeError unless `m` is a nonempty square matrix with finite entries.
inline void require_operator(const ComplexMatrix& m, const char* what = "operator") {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw ShapeError(std::string(what) + " must be a nonempty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!m.allFinite()) throw ShapeError(std::string(what) + " has non-finite entries");
}

inline bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx{0.0, 0.0}) return false;
  return true;
}

inline double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct ResolventResult {
  ComplexMatrix value;  // (zI - T)^{-1}
  double residual = 0;  // ||(zI - T) value - I||_F, an upper bound for the 2-norm residual
};

constexpr double kPivotTolerance = 1e-14;
constexpr double kResidualTolerance = 1e-10;

/// R(z,T) = (zI - T)^{-1} by LU with partial pivoting. The attached residual is
/// checked against 1e-10 (1 + ||R||); failure of either the pivot test or the
/// residual test raises SingularResolvent.
inline ResolventResult resolvent(const ComplexMatrix& T, cplx z) {
  require_operator(T);
  const Eigen::Index n = T.rows();
  ComplexMatrix A = -T;
  A.diagonal().array() += z;
  const double scale = max_abs_entry(A);

  Eigen::PartialPivLU<ComplexMatrix> lu(A);
  const double pivot_floor = kPivotTolerance * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(lu.matrixLU()(i, i)) >= pivot_floor) || scale == 0.0)
      throw SingularResolvent("zero pivot at z = (" + std::to_string(z.real()) + ", " +
                              std::to_string(z.imag()) + ")");
  }
  ResolventResult out;
  out.value = lu.inverse();
  ComplexMatrix check = A * out.value;
  check.diagonal().array() -= 1.0;
  out.residual = check.norm();
  // ||X||_F / sqrt(n) <= ||X||_2, so this test is no looser than the stated one.
  const double bound =
      kResidualTolerance * (1.0 + out.value.norm() / std::sqrt(static_cast<double>(n)));
  if (!(out.residual <= bound))
    throw SingularResolvent("residual certificate " + std::to_string(out.residual) +
                            " exceeds " + std::to_string(bound));
  return out;
}

/// Largest singular value. Computed as sqrt of the top eigenvalue of M^H M
/// (Hermitian tridiagonal QR); diagonal inputs short-circuit to max |m_ii|.
inline double op_norm2(const ComplexMatrix& M) {
  if (M.size() == 0) return 0.0;
  if (M.rows() == M.cols() && is_diagonal(M)) return M.diagonal().cwiseAbs().maxCoeff();
  if (M.rows() == 1 || M.cols() == 1) return M.norm();
  const ComplexMatrix H = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("Hermitian eigensolver failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

struct PowerIterationOptions {
  double rel_tol = 1e-12;
  int max_iterations = 20000;
  std::uint64_t seed = 0x5eed;
};

/// Largest singular value by power iteration on M^H M with a random complex start.
/// One restart from a fresh vector when the iterate collapses; NoConvergence once
/// the iteration cap is reached.
inline double op_norm2_power(const ComplexMatrix& M, const PowerIterationOptions& opt = {}) {
  if (M.size() == 0) return 0.0;
  const Eigen::Index n = M.cols();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_unit = [&] {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
    return ComplexVector(v / v.norm());
  };

  for (int attempt = 0; attempt < 2; ++attempt) {
    ComplexVector v = random_unit();
    double estimate = 0.0;
    bool collapsed = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const ComplexVector Mv = M * v;
      const double next = Mv.norm();
      ComplexVector w = M.adjoint() * Mv;
      const double wn = w.norm();
      if (wn == 0.0) {
        if (next == 0.0 && M.norm() == 0.0) return 0.0;
        collapsed = true;
        break;
      }
      v = w / wn;
      if (it > 0 && std::abs(next - estimate) <= opt.rel_tol * next) return next;
      estimate = next;
    }
    if (!collapsed) break;
  }
  throw NoConvergence("power iteration reached " + std::to_string(opt.max_iterations) +
                      " iterations");
}

/// T^k by binary powering (T^0 = I).
inline ComplexMatrix mat_pow(const ComplexMatrix& T, long long k) {
  const Eigen::Index n = T.rows();
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  if (is_diagonal(T)) {
    for (Eigen::Index i = 0; i < n; ++i) result(i, i) = ipow(T(i, i), k);
    return result;
  }
  ComplexMatrix base = T;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

/// p(T) = T^m p0(T) with p0 evaluated by the Horner recurrence on matrices.
inline ComplexMatrix mat_poly(const PolySpan& p, const ComplexMatrix& T) {
  require_operator(T, "mat_poly operand");
  const Eigen::Index n = T.rows();
  if (is_diagonal(T)) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = p(T(i, i));
    return out;
  }
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  acc.diagonal().setConstant(p.coeffs.back());
  for (std::size_t j = p.coeffs.size() - 1; j-- > 0;) {
    acc = acc * T;
    acc.diagonal().array() += p.coeffs[j];
  }
  if (p.m == 0) return acc;
  return mat_pow(T, p.m) * acc;
}

/// ||R(z,T)||_2, exact for diagonal T and via `resolvent` otherwise.
inline double resolvent_norm(const ComplexMatrix& T, cplx z, bool diagonal) {
  if (diagonal) {
    double dmin = INFINITY;
    for (Eigen::Index i = 0; i < T.rows(); ++i) dmin = std::min(dmin, std::abs(z - T(i, i)));
    const double scale = std::max(std::abs(z), max_abs_entry(T));
    if (!(dmin >= kPivotTolerance * scale) || dmin == 0.0)
      throw SingularResolvent("z lies on the diagonal spectrum");
    return 1.0 / dmin;
  }
  return op_norm2(resolvent(T, z).value);
}

/// Condition number ||S|| ||S^{-1}|| in the 2-norm.
inline double condition_number(const ComplexMatrix& S) {
  Eigen::PartialPivLU<ComplexMatrix> lu(S);
  return op_norm2(S) * op_norm2(lu.inverse());
}

}  // namespace rittcalc
