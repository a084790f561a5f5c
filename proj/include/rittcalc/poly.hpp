#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace rittcalc {

using cplx = std::complex<double>;

/// z^k by binary powering; exact for z = 0 and z on the real axis up to roundoff.
inline cplx ipow(cplx z, long long k) {
  cplx result{1.0, 0.0};
  cplx base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

/// Horner evaluation of sum_j c[j] z^j.
inline cplx horner(std::span<const cplx> c, cplx z) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
  return acc;
}

/// A polynomial p(z) = sum_{k=m}^{n} a_k z^k, stored as the lowest degree m and
/// the coefficient block a_m..a_n. Elements of H^inf[m,n].
struct PolySpan {
  int m = 0;
  std::vector<cplx> coeffs{cplx{0.0, 0.0}};  // coeffs[j] = a_{m+j}

  PolySpan() = default;
  PolySpan(int lowest, std::vector<cplx> c) : m(lowest), coeffs(std::move(c)) {
    if (m < 0) throw BadParameters("PolySpan lowest degree must be nonnegative");
    if (coeffs.empty()) throw BadParameters("PolySpan needs at least one coefficient");
  }

  static PolySpan monomial(int k, cplx a = {1.0, 0.0}) { return PolySpan(k, {a}); }

  /// Highest degree n of the span (not necessarily of a nonzero coefficient).
  int n() const { return m + static_cast<int>(coeffs.size()) - 1; }

  cplx coefficient(int k) const {
    if (k < m || k > n()) return {0.0, 0.0};
    return coeffs[static_cast<std::size_t>(k - m)];
  }

  cplx operator()(cplx z) const { return ipow(z, m) * horner(coeffs, z); }

  /// Trailing zero coefficients removed; the zero polynomial keeps one slot.
  PolySpan normalized() const {
    PolySpan out = *this;
    while (out.coeffs.size() > 1 && out.coeffs.back() == cplx{0.0, 0.0}) out.coeffs.pop_back();
    return out;
  }

  /// q(z) = p(s z).
  PolySpan scaled_argument(double s) const {
    PolySpan out = *this;
    double power = 1.0;
    for (int k = 0; k < m; ++k) power *= s;
    for (auto& c : out.coeffs) {
      c *= power;
      power *= s;
    }
    return out;
  }

  /// p with the factor z^m removed (the cofactor p0 with p = z^m p0).
  PolySpan cofactor() const { return PolySpan(0, coeffs); }

  /// z^k p(z).
  PolySpan shifted(int k) const { return PolySpan(m + k, coeffs); }
};

inline PolySpan operator*(const PolySpan& p, const PolySpan& q) {
  std::vector<cplx> c(p.coeffs.size() + q.coeffs.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) c[i + j] += p.coeffs[i] * q.coeffs[j];
  return PolySpan(p.m + q.m, std::move(c));
}

}  // namespace rittcalc
