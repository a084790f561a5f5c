#include <catch_amalgamated.hpp>

#include <rittcalc/special.hpp>

using namespace rittcalc;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}  // namespace

TEST_CASE("exponential integral reference values") {
  // reference values from a 50-digit evaluation
  CHECK(rel_close(exp_integral(1.0), 0.21938393439552027368, 1e-12));
  CHECK(rel_close(exp_integral(0.5), 0.55977359477616081175, 1e-12));
  CHECK(rel_close(exp_integral(0.025), 3.1365084032151682, 1e-12));
  CHECK(rel_close(exp_integral(2.0), 0.048900510708061119567, 1e-12));
  CHECK(rel_close(exp_integral(10.0), 4.1569689296853242774e-06, 1e-12));
  CHECK(rel_close(exp_integral(1e-4), 8.6332247045747054, 1e-12));
}

TEST_CASE("exponential integral domain") {
  CHECK_THROWS_AS(exp_integral(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral(-1.0), DomainError);
  CHECK(exp_integral(0.25) < std::log(4.0));
}

TEST_CASE("exponential integral sandwich, monotonicity and log-convexity") {
  std::vector<double> s, v;
  for (int i = 0; i < 200; ++i) {
    s.push_back(std::exp(std::log(1e-4) + (std::log(50.0) - std::log(1e-4)) * i / 199));
    v.push_back(exp_integral(s.back()));
    CHECK(ei_lower_estimate(s.back()) < v.back());
    CHECK(v.back() < ei_upper_estimate(s.back()));
    if (s.back() <= 0.5) CHECK(v.back() < std::log(1.0 / s.back()));
  }
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
  // log-convexity in s on the grid: slopes of ln Ei increase
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double left = (std::log(v[i]) - std::log(v[i - 1])) / (s[i] - s[i - 1]);
    const double right = (std::log(v[i + 1]) - std::log(v[i])) / (s[i + 1] - s[i]);
    CHECK(right >= left);
  }
}

TEST_CASE("Lemma 2 majorant") {
  const Lemma2Inputs in{0.1, 0, pi / 3};
  const double expect = 4.0 * (std::sqrt(3.0) / 2.0) * std::log(8.0) +
                        4.0 * exp_integral(0.025) + 2.0 * pi;
  CHECK(rel_close(lemma2_bound(in), expect, 1e-14));
  CHECK(rel_close(lemma2_bound(in), 26.032615723157922, 1e-13));
  CHECK_THROWS_AS(lemma2_bound({0.0, 0, pi / 3}), BadParameters);
  CHECK_THROWS_AS(lemma2_bound({0.1, -1, pi / 3}), BadParameters);
  CHECK_THROWS_AS(lemma2_bound({0.1, 0, pi / 2}), BadParameters);
}

TEST_CASE("simplified majorant dominates when r <= 1/(m+1)") {
  for (int m : {0, 1, 4, 20})
    for (double eta : {0.2, pi / 4, 1.4})
      for (double r : {1e-3, 0.01, 1.0 / (m + 1.0)}) {
        if (r >= 1.0) continue;
        const Lemma2Inputs in{r, m, eta};
        CHECK(lemma2_bound(in) <= lemma2_simplified_bound(in));
      }
  CHECK_THROWS_AS(lemma2_simplified_bound({0.6, 1, pi / 4}), BadParameters);
}

TEST_CASE("Ei term of the majorant decreases with m") {
  double prev = INFINITY;
  for (int m = 0; m <= 30; ++m) {
    const double term = 4.0 * exp_integral(0.1 * (m + 1.0) * std::cos(pi / 3) / 2.0);
    CHECK(term < prev);
    prev = term;
  }
}

TEST_CASE("keyhole kernel integral golden values") {
  // frozen from an independent adaptive quadrature of the same parametrization
  CHECK(rel_close(keyhole_kernel_integral({0.1, 0, pi / 3}, 1e-10), 11.14286069844127, 1e-8));
  CHECK(rel_close(keyhole_kernel_integral({0.2, 3, pi / 4}, 1e-10), 8.119592013482468, 1e-8));
  CHECK(rel_close(keyhole_kernel_integral({0.6, 2, pi / 3}, 1e-10), 10.31718902697933, 1e-8));
}

TEST_CASE("keyhole kernel integral is below the majorant") {
  for (const Lemma2Inputs in : {Lemma2Inputs{0.1, 0, pi / 3}, Lemma2Inputs{0.6, 2, pi / 3},
                                Lemma2Inputs{0.95, 50, pi / 8}, Lemma2Inputs{0.01, 10, 0.49 * pi}}) {
    CHECK(keyhole_kernel_integral(in, 1e-8) <= lemma2_bound(in));
  }
}

TEST_CASE("arc around 1 contributes at most 2 pi (1+r)^m") {
  const auto parts = keyhole_kernel_panels({0.5, 0, pi / 4}, 1e-10);
  REQUIRE(parts.size() == 4);
  CHECK(parts[2] <= 2 * pi);
  // on that arc |z - 1| = r, so with m = 0 the integral is the angle 2 (pi - eta)
  CHECK(std::abs(parts[2] - 2 * (pi - pi / 4)) < 1e-10);
}
