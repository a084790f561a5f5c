#include <catch_amalgamated.hpp>

#include <rittcalc/operators.hpp>
#include <rittcalc/profile.hpp>

using namespace rittcalc;

namespace {

ComplexMatrix diag(std::initializer_list<cplx> v) {
  ComplexVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx x : v) d(i++) = x;
  return d.asDiagonal();
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ();
}

// sup over n >= 1 of |l|^n and n |l^n - l^{n-1}| by enumerating the sequence
std::pair<double, double> enumerate_scalar(cplx l, long N) {
  double pb = 0, c1 = 0;
  cplx prev = 1.0, cur = l;
  for (long n = 1; n <= N; ++n) {
    pb = std::max(pb, std::abs(cur));
    c1 = std::max(c1, static_cast<double>(n) * std::abs(cur - prev));
    prev = cur;
    cur *= l;
  }
  return {pb, c1};
}

}  // namespace

TEST_CASE("Tadmor-Ritt constant of simple operators") {
  const auto id = tadmor_ritt_constant(ComplexMatrix::Identity(3, 3), 256);
  CHECK(std::abs(id.value - 1.0) < 1e-12);

  const auto zero = tadmor_ritt_constant(ComplexMatrix::Zero(2, 2), 256);
  CHECK(std::abs(zero.value - 2.0) < 1e-5);
  CHECK(std::abs(zero.argmax + 1.0) < 1e-3);

  // max of |z-1|/|z-1/2| on the circle is 4/3 at z = -1
  const auto d = tadmor_ritt_constant(diag({1.0, 0.5}), 256);
  CHECK(std::abs(d.value - 4.0 / 3.0) < 1e-5);
  CHECK(d.converged);
}

TEST_CASE("Kreiss constant of simple operators") {
  CHECK(std::abs(kreiss_constant(ComplexMatrix::Identity(2, 2), 256).value - 1.0) < 1e-9);
  CHECK(std::abs(kreiss_constant(ComplexMatrix::Zero(2, 2), 256).value - 1.0) < 1e-9);
}

TEST_CASE("profile ordering c_kreiss <= c_tr on the factory") {
  for (const auto& op : factory_suite()) {
    const auto p = profile_operator(op.matrix, 128);
    INFO(op.name);
    CHECK(p.c_kreiss <= p.c_tr);
    CHECK(p.c_tr >= 1.0);
    CHECK(p.theta == Catch::Approx(std::acos(1.0 / p.c_tr)));
    CHECK(p.pb >= op_norm2(op.matrix) - 1e-12);
    CHECK(p.pb >= p.spectral_radius_bound - 1e-6);
  }
}

TEST_CASE("spectral precheck") {
  CHECK_THROWS_AS(tadmor_ritt_constant(1.1 * ComplexMatrix::Identity(2, 2), 64), SpectrumOutsideDisc);
  CHECK_THROWS_AS(kreiss_constant(jordan_block(1.01, 3), 64), SpectrumOutsideDisc);
  const double rho = spectral_radius_bound(jordan_block(0.5, 4));
  CHECK(rho >= 0.5);
  CHECK(rho < 0.5 + 1e-6);
}

TEST_CASE("ring angles include the geometric points near zero") {
  const auto a = ring_angles(256);
  CHECK(a.size() <= 256 + 64);
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  CHECK(std::is_sorted(a.begin(), a.end()));
  for (int j = 1; j <= 32; ++j) {
    CHECK(std::find(a.begin(), a.end(), std::ldexp(pi, -j)) != a.end());
    CHECK(std::find(a.begin(), a.end(), -std::ldexp(pi, -j)) != a.end());
  }
}

TEST_CASE("sector constant") {
  const ComplexMatrix T = diag({1.0, 0.5});
  const double C = tadmor_ritt_constant(T, 256).value;
  const double theta = type_angle(C);
  const double at_disc = sector_constant(T, pi / 2, theta, 256).value;
  CHECK(std::abs(at_disc - C) < 1e-3);

  const double c3 = sector_constant(T, pi / 3, theta, 256).value;
  CHECK(c3 >= C - 1e-9);
  CHECK(c3 <= C / (1.0 - std::cos(pi / 3) / std::cos(theta)) + 1e-3);

  CHECK_THROWS_AS(sector_constant(T, theta - 0.01, theta, 256), EtaTooSmall);
  CHECK_THROWS_AS(sector_constant(T, 1.6, theta, 256), BadParameters);
}

TEST_CASE("sector constant decreases in eta") {
  const auto op = random_tr(6, pi / 4, 5.0, 11);
  const double C = tadmor_ritt_constant(op.matrix, 256).value;
  const double theta = type_angle(C);
  double prev = INFINITY;
  for (double eta = theta + 0.05; eta <= pi / 2; eta += 0.1) {
    const double ce = sector_constant(op.matrix, eta, theta, 256).value;
    CHECK(ce <= prev + 1e-3);
    CHECK(ce <= C / (1.0 - std::cos(eta) / std::cos(theta)) + 1e-3);
    prev = ce;
  }
}

TEST_CASE("scaling law for rT") {
  for (const auto& op : factory_suite()) {
    const double C = tadmor_ritt_constant(op.matrix, 128).value;
    for (double r : {0.5, 0.9, 0.99}) {
      INFO(op.name << " r=" << r);
      CHECK(tadmor_ritt_constant(ComplexMatrix(r * op.matrix), 128).value <=
            2.0 * C / (1.0 + r) + 1e-3);
    }
  }
}

TEST_CASE("discrete characteristics examples") {
  const auto id = discrete_characteristics(ComplexMatrix::Identity(3, 3), 1000);
  CHECK(id.pb == 1.0);
  CHECK(id.c1 == 0.0);
  CHECK(id.converged);

  const auto half = discrete_characteristics(diag({0.5}), 1000);
  CHECK(half.pb == 0.5);
  CHECK(half.c1 == 0.5);

  const auto mult = discrete_characteristics(multiplier_operator(16), kDefaultNMax);
  CHECK(std::abs(mult.pb - 1.0) < 1e-4);
  CHECK(mult.converged);
}

TEST_CASE("diagonal characteristics match sequence enumeration") {
  const std::vector<cplx> lambdas = {0.9, 0.5, cplx(0.25, 0.25), -0.3, 0.99, 0.999, 1.0, 0.0};
  double pb = 0, c1 = 0;
  for (cplx l : lambdas) {
    const auto [p, c] = enumerate_scalar(l, 200000);
    pb = std::max(pb, p);
    c1 = std::max(c1, c);
  }
  ComplexVector d(static_cast<Eigen::Index>(lambdas.size()));
  for (std::size_t i = 0; i < lambdas.size(); ++i) d(static_cast<Eigen::Index>(i)) = lambdas[i];
  const auto dc = discrete_characteristics(ComplexMatrix(d.asDiagonal()), kDefaultNMax);
  CHECK(std::abs(dc.pb - pb) <= 1e-12 * pb);
  CHECK(std::abs(dc.c1 - c1) <= 1e-12 * c1);
  CHECK(dc.converged);
}

TEST_CASE("power scan agrees with the diagonal path under unitary similarity") {
  const ComplexMatrix D = diag({0.9, 0.5, -0.3, cplx(0.0, 0.6)});
  const ComplexMatrix U = random_unitary(4, 21);
  const auto scan = discrete_characteristics(ComplexMatrix(U * D * U.adjoint()), kDefaultNMax);
  const auto exact = discrete_characteristics(D, kDefaultNMax);
  CHECK(scan.converged);
  CHECK(std::abs(scan.pb - exact.pb) < 1e-10);
  CHECK(std::abs(scan.c1 - exact.c1) < 1e-10);
}

TEST_CASE("unimodular diagonal entries are flagged as unconverged") {
  const auto dc = discrete_characteristics(diag({cplx(0.0, 1.0), 0.5}), 1000);
  CHECK_FALSE(dc.converged);
  CHECK(dc.pb == 1.0);
}

TEST_CASE("power growth overflows") {
  ComplexMatrix T(2, 2);
  T << 1.1, 1.0, 0.0, 0.5;
  CHECK_THROWS_AS(discrete_characteristics(T, 20000), Overflow);
  CHECK_THROWS_AS(discrete_characteristics(diag({1.01}), 100), Overflow);
}

TEST_CASE("Spijker check") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto op = random_tr(6, pi / 3, 10.0, seed);
    const auto dc = discrete_characteristics(op.matrix, kDefaultNMax);
    const double ck = kreiss_constant(op.matrix, 128).value;
    CHECK(spijker_check(dc.pb, ck, 6).pass);
  }
}

TEST_CASE("Nikolski check") {
  // unitary operator with orthonormal eigenbasis
  const ComplexMatrix U = random_unitary(5, 4);
  ComplexVector ev(5);
  for (int j = 0; j < 5; ++j) ev(j) = std::polar(1.0, 0.7 * j + 0.1);
  CHECK(std::abs(basis_constant(U) - 1.0) < 1e-12);
  const auto rep = nikolski_check(ev, U, 1.0, 64);
  CHECK(rep.pass);
  CHECK(std::abs(rep.lhs - 1.0) < 1e-12);

  // mildly skewed basis
  const auto op = unimodular_operator(8, 0.1, 3);
  const double b = basis_constant(op.eigen->vectors);
  CHECK(b >= 1.0);
  CHECK(b < 1.5);
  const double ck = kreiss_constant(op.matrix, 128).value;
  CHECK(nikolski_check(op.eigen->values, op.eigen->vectors, ck).pass);

  ev(2) = 0.9;
  CHECK_THROWS_AS(nikolski_check(ev, U, 1.0), SpectrumNotUnimodular);
}
