// Profile a Jordan block, evaluate a polynomial through the keyhole integral and
// compare ||p(T)|| with the Theorem-2 bound.

#include <rittcalc/rittcalc.hpp>

#include <cstdio>

using namespace rittcalc;

int main() {
  const ComplexMatrix T = jordan_block(0.5, 4);
  const OperatorProfile prof = profile_operator(T);
  std::printf("jordan(0.5, 4): C(T) = %.6f  C_Kreiss = %.6f  theta = %.4f  Pb = %.6f  c1 = %.6f\n",
              prof.c_tr, prof.c_kreiss, prof.theta, prof.pb, prof.c1);

  std::mt19937_64 rng(5);
  const PolySpan p = random_span(2, 12, rng);
  const auto c = default_contour(prof.theta, p.n());
  const auto rd = riesz_dunford(T, p, c.eta, c.r);
  const ComplexMatrix direct = mat_poly(p, T);
  std::printf("keyhole eta = %.4f r = %.4f: %ld evaluations, |contour - Horner| = %.2e\n", c.eta, c.r,
              rd.evaluations, op_norm2(rd.value - direct));

  const double lhs = op_norm2(direct);
  const double rhs = thm2_bound(prof.c_tr, p.m, p.n()) * sup_norm_disc(p);
  std::printf("||p(T)|| = %.6f <= %.6f (Theorem 2 with s = 1/2)\n", lhs, rhs);

  for (int k = 1; k <= 6; ++k) {
    const int n = 1 << k;
    std::printf("  C(T,0,%-3d) >= %.6f   bound %.3f\n", n, ctm_search(T, 0, n, 32, 1),
                thm2_bound(prof.c_tr, 0, n));
  }
  return 0;
}
