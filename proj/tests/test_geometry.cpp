#include <catch_amalgamated.hpp>

#include <rittcalc/geometry.hpp>

#include <random>

using namespace rittcalc;

namespace {

// Interior test through the support function of the hull of {1} and the disc
// of radius sin(theta): h(phi) = max(cos phi, sin theta).
bool hull_oracle(double theta, cplx z, double margin) {
  for (int k = 0; k < 4096; ++k) {
    const double phi = 2 * pi * k / 4096;
    const double proj = (z * std::polar(1.0, -phi)).real();
    if (proj >= std::max(std::cos(phi), std::sin(theta)) - margin) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("stolz_contains basic points") {
  for (double th : {0.1, pi / 4, pi / 2}) CHECK(stolz_contains({th}, 0.0));
  CHECK_FALSE(stolz_contains({pi / 4}, 1.0));
  CHECK(stolz_contains({pi / 4}, 0.99));
  CHECK_FALSE(stolz_contains({pi / 4}, cplx(0.99, 0.05)));
  CHECK_FALSE(stolz_contains({pi / 2}, 1.0));
  CHECK_FALSE(stolz_contains({pi / 3}, -0.9));
}

TEST_CASE("stolz_contains agrees with the support-function oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  for (double th : {0.3, pi / 4, pi / 3, 1.4}) {
    int checked = 0;
    for (int k = 0; k < 3000; ++k) {
      const cplx z(u(rng), u(rng));
      const bool inside = hull_oracle(th, z, 1e-3);
      const bool outside = !hull_oracle(th, z, -1e-3);
      if (inside) CHECK(stolz_contains({th}, z));
      if (outside) CHECK_FALSE(stolz_contains({th}, z));
      checked += inside || outside;
    }
    CHECK(checked > 2500);
  }
}

TEST_CASE("keyhole panels and closure") {
  const auto c = keyhole_contour(pi / 3, 0.1);
  CHECK(c.panels.size() == 4);
  CHECK_FALSE(c.two_arc);
  CHECK(closure_mismatch(c.panels) < 1e-12);
  CHECK(c.panels[0].kind == PanelKind::arc);
  CHECK(c.panels[1].kind == PanelKind::segment);
  CHECK(c.panels[2].kind == PanelKind::arc);
  CHECK(c.panels[3].kind == PanelKind::segment);
  // Gamma_2 runs along 1 - t e^{+-i eta} for t in [r, cos eta]
  CHECK(std::abs(c.panels[1].end - (1.0 - 0.1 * std::polar(1.0, pi / 3))) < 1e-15);
  CHECK(std::abs(c.panels[3].end - (1.0 - 0.5 * std::polar(1.0, -pi / 3))) < 1e-12);

  const auto d = keyhole_contour(pi / 3, 0.6);
  CHECK(d.panels.size() == 2);
  CHECK(d.two_arc);
  CHECK(closure_mismatch(d.panels) < 1e-12);
  CHECK(std::abs(std::abs(d.panels[0].point(0.0) - 1.0) - 0.6) < 1e-12);
}

TEST_CASE("keyhole parameter validation") {
  CHECK_THROWS_AS(keyhole_contour(0.0, 0.1), BadParameters);
  CHECK_THROWS_AS(keyhole_contour(pi / 2, 0.1), BadParameters);
  CHECK_THROWS_AS(keyhole_contour(pi / 3, 0.0), BadParameters);
  CHECK_THROWS_AS(keyhole_contour(pi / 3, 1.0), BadParameters);
}

TEST_CASE("keyhole arclength") {
  const auto c = keyhole_contour(pi / 3, 0.1);
  // frozen value of the analytic panel lengths
  CHECK(std::abs(c.arclength() - 5.753377431064183) < 1e-12);
  const auto q = arclength_quadrature(std::span<const Panel>(c.panels), [](cplx) { return 1.0; }, 1e-12);
  CHECK(std::abs(q.value - c.arclength()) < 1e-8);
}

TEST_CASE("arclength is continuous across the two-arc threshold") {
  for (double eta : {pi / 8, pi / 4, pi / 3}) {
    const double co = std::cos(eta);
    const double a = keyhole_contour(eta, co - 1e-6).arclength();
    const double b = keyhole_contour(eta, co + 1e-6).arclength();
    CHECK(std::abs(a - b) < 1e-3);
  }
}

TEST_CASE("stored derivatives match finite differences") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (auto c : {keyhole_contour(pi / 3, 0.1), keyhole_contour(pi / 3, 0.6)}) {
    for (const auto& p : c.panels) {
      for (int k = 0; k < 100; ++k) {
        const double t = u(rng);
        const double h = 1e-6;
        const cplx fd = (p.point(t + h) - p.point(t - h)) / (2 * h);
        CHECK(std::abs(fd - p.derivative(t)) < 1e-6);
      }
    }
  }
}

TEST_CASE("Cauchy integrals over keyholes") {
  const cplx two_pi_i(0.0, 2 * pi);
  for (auto c : {keyhole_contour(pi / 3, 0.1), keyhole_contour(pi / 4, 0.5),
                 keyhole_contour(pi / 3, 0.6)}) {
    auto q1 = contour_quadrature(c, [](cplx z) { return 1.0 / (z - 1.0); }, 1e-12);
    CHECK(std::abs(q1.value - two_pi_i) < 1e-10);
    auto q0 = contour_quadrature(c, [](cplx z) { return z; }, 1e-12);
    CHECK(std::abs(q0.value) < 1e-10);
    auto qz = contour_quadrature(c, [](cplx z) { return 1.0 / z; }, 1e-12);
    CHECK(std::abs(qz.value - two_pi_i) < 1e-10);
    // orientation at the centre of each disc
    for (cplx w : {cplx(0.0, 0.0), cplx(1.0, 0.0)}) {
      auto q = contour_quadrature(c, [w](cplx z) { return 1.0 / (z - w); }, 1e-12);
      CHECK(std::abs(q.value - two_pi_i) < 1e-9);
    }
    // a point outside encloses nothing
    auto qo = contour_quadrature(c, [](cplx z) { return 1.0 / (z - 3.0); }, 1e-12);
    CHECK(std::abs(qo.value) < 1e-10);
  }
}

TEST_CASE("quadrature stalls on a double pole on the contour") {
  const auto c = keyhole_contour(pi / 3, 0.1);
  const cplx pole = c.panels[0].point(0.5);
  CHECK_THROWS_AS(
      contour_quadrature(c, [pole](cplx z) { return 1.0 / ((z - pole) * (z - pole)); }, 1e-10), QuadratureStall);
}

TEST_CASE("Stolz boundary") {
  const auto disc = stolz_boundary(pi / 2);
  CHECK(disc.size() == 1);
  CHECK(std::abs(total_length(disc) - 2 * pi) < 1e-14);
  const auto b = stolz_boundary(pi / 4);
  CHECK(b.size() == 3);
  CHECK(closure_mismatch(b) < 1e-15);
  auto q = contour_quadrature(std::span<const Panel>(b), [](cplx z) { return 1.0 / (z - 0.5); }, 1e-12);
  CHECK(std::abs(q.value - cplx(0.0, 2 * pi)) < 1e-10);
}

TEST_CASE("Gauss-Legendre rule integrates degree 31 exactly") {
  const auto& r = gauss_legendre16();
  double w = 0, x30 = 0;
  for (int i = 0; i < 16; ++i) {
    w += r[1][i];
    x30 += r[1][i] * std::pow(r[0][i], 30);
  }
  CHECK(std::abs(w - 2.0) < 1e-14);
  CHECK(std::abs(x30 - 2.0 / 31.0) < 1e-14);
}
