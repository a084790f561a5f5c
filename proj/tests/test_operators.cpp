#include <catch_amalgamated.hpp>

#include <rittcalc/fcalc.hpp>
#include <rittcalc/operators.hpp>
#include <rittcalc/profile.hpp>

using namespace rittcalc;

TEST_CASE("multiplier operator") {
  CHECK(multiplier_operator(1)(0, 0) == 0.5);
  const ComplexMatrix m3 = multiplier_operator(3);
  CHECK(m3(0, 0) == 0.5);
  CHECK(m3(1, 1) == 0.75);
  CHECK(m3(2, 2) == 0.875);
  CHECK(is_diagonal(m3));
  CHECK_THROWS_AS(multiplier_operator(65), PrecisionLoss);
  CHECK_NOTHROW(multiplier_operator(64));

  const double c16 = tadmor_ritt_constant(multiplier_operator(16), 256).value;
  const double c32 = tadmor_ritt_constant(multiplier_operator(32), 256).value;
  CHECK(std::abs(c16 - c32) < 0.05 * c32);
}

TEST_CASE("Jordan block") {
  const ComplexMatrix J = jordan_block(0.5, 2);
  ComplexMatrix e(2, 2);
  e << 0.5, 1.0, 0.0, 0.5;
  CHECK(J == e);
  CHECK_THROWS_AS(jordan_block(0.5, 0), BadParameters);
}

TEST_CASE("Cayley transform") {
  CHECK(op_norm2(cayley(ComplexMatrix::Identity(3, 3))) < 1e-15);
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 2.0;
  const ComplexMatrix C = cayley(A);
  CHECK(std::abs(C(0, 0)) < 1e-15);
  CHECK(std::abs(C(1, 1) + 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(C(0, 1)) < 1e-15);
  CHECK_THROWS_AS(cayley(-ComplexMatrix::Identity(2, 2)), SingularResolvent);

  const ComplexMatrix H = random_hpd(6, 0.1, 10.0, 3);
  const ComplexMatrix CH = cayley(H);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(CH);
  for (Eigen::Index j = 0; j < 6; ++j) {
    CHECK(std::abs(es.eigenvalues()(j).imag()) < 1e-10);
    CHECK(std::abs(es.eigenvalues()(j).real()) < 1.0);
  }
  CHECK(std::isfinite(tadmor_ritt_constant(CH, 128).value));
}

TEST_CASE("random Tadmor-Ritt operators") {
  const auto a = random_tr(10, pi / 3, 8.0, 42);
  const auto b = random_tr(10, pi / 3, 8.0, 42);
  CHECK(a.matrix == b.matrix);  // bit-identical
  for (Eigen::Index j = 0; j < a.eigen->values.size(); ++j)
    CHECK(stolz_contains({pi / 3}, a.eigen->values(j)));
  CHECK(condition_number(a.eigen->vectors) <= 8.0 * (1 + 1e-9));
  CHECK(condition_number(a.eigen->vectors) > 7.0);

  const auto normal = random_tr(6, pi / 4, 1.0, 5);
  CHECK(is_diagonal(normal.matrix));
  CHECK(ctm_search(normal.matrix, 0, 16, 40, 1) <= 1.0 + 1e-6);
  CHECK_THROWS_AS(random_tr(4, pi / 2, 2.0, 1), BadParameters);
}

TEST_CASE("factory operators pass the spectral precheck") {
  for (const auto& op : factory_suite()) {
    INFO(op.name);
    CHECK_NOTHROW(require_spectrum_in_disc(op.matrix));
  }
}

TEST_CASE("C(T,m,n) search") {
  const ComplexMatrix J = jordan_block(0.5, 4);
  CHECK(ctm_search(J, 0, 8, 32, 1) > 1.0);
  for (int m : {0, 2, 5})
    CHECK(ctm_search(J, m, m + 10, 8, 3) >= op_norm2(mat_pow(J, m)) * (1 - 1e-12));

  // monotone in the budget: candidate lists are prefix-stable
  double prev = 0.0;
  for (int budget : {1, 4, 16, 64}) {
    const double v = ctm_search(J, 3, 40, budget, 9);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(ctm_search(J, 0, 5000, 4, 1), BadParameters);
}

TEST_CASE("search never exceeds the Theorem 2 bound") {
  for (const auto& op : factory_suite()) {
    const double C = tadmor_ritt_constant(op.matrix, 128).value;
    INFO(op.name);
    CHECK(ctm_search(op.matrix, 0, 8, 24, 2) <= thm2_bound(C, 0, 8) + 1e-6);
  }
}

TEST_CASE("candidates stay inside the span") {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const PolySpan p = ctm_candidate(5, 37, 4, i);
    CHECK(p.m >= 5);
    CHECK(p.n() <= 37);
  }
}

TEST_CASE("uniform basis constant") {
  std::mt19937_64 rng(1);
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(rng, 6, 6));
  const ComplexMatrix Q = qr.householderQ();
  CHECK(std::abs(uniform_basis_constant(Q, 30, 1) - 1.0) < 1e-12);

  ComplexMatrix scaled = ComplexMatrix::Identity(4, 4);
  scaled.col(2) *= 3.0;
  CHECK(std::abs(uniform_basis_constant(scaled, 30, 1) - 1.0) < 1e-12);

  const ComplexMatrix V = ComplexMatrix::Identity(8, 8) + gaussian_matrix(rng, 8, 8, 0.3);
  double prev = 0.0;
  for (int budget : {1, 5, 25, 100}) {
    const double v = uniform_basis_constant(V, budget, 7);
    CHECK(v >= 1.0 - 1e-12);
    CHECK(v >= prev);
    prev = v;
  }
}
