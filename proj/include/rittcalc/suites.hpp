#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fcalc.hpp"
#include "linalg.hpp"
#include "operators.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "special.hpp"
#include "sqfe.hpp"

namespace rittcalc {

struct SuiteOptions {
  int grid = kDefaultGrid;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int samples = 20;  // random draws per configuration
  long n_max = kDefaultNMax;
  double s = 0.5;
};

/// Complex Gaussian coefficients on [m, n].
inline PolySpan random_span(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<cplx> c(static_cast<std::size_t>(n - m + 1));
  for (auto& v : c) v = cplx(normal(rng), normal(rng));
  return PolySpan(m, std::move(c));
}

struct ProfiledOperator {
  Operator op;
  OperatorProfile profile;
};

inline std::vector<ProfiledOperator> profiled_factory(const SuiteOptions& opt) {
  std::vector<ProfiledOperator> out;
  for (auto& op : factory_suite()) {
    OperatorProfile p = profile_operator(op.matrix, opt.grid, opt.n_max);
    out.push_back({std::move(op), p});
  }
  return out;
}

// ---------------------------------------------------------------------------

/// The exponential-integral estimates on a log grid and G <= lemma2_bound on
/// the 6 x 4 x 5 parameter grid, plus the simplified majorant where it applies.
inline std::vector<BoundReport> suite_lemma2(const SuiteOptions& opt, int ei_points = 200) {
  std::vector<BoundReport> out;
  for (int i = 0; i < ei_points; ++i) {
    const double s = std::exp(std::log(1e-4) + (std::log(50.0) - std::log(1e-4)) * i / (ei_points - 1));
    const double ei = exp_integral(s);
    // strict inequalities: require a positive margin
    auto strict = [&](const char* name, double lhs, double rhs) {
      BoundReport r = make_report(name, lhs, rhs, 0.0, Params().add("s", s));
      r.pass = r.pass && lhs < rhs;
      out.push_back(r);
    };
    strict("ei_lower", ei_lower_estimate(s), ei);
    strict("ei_upper", ei, ei_upper_estimate(s));
    if (s <= 0.5) strict("ei_log", ei, std::log(1.0 / s));
  }
  const int ms[] = {0, 1, 2, 5, 10, 50};
  const double etas[] = {pi / 8, pi / 4, pi / 3, 0.49 * pi};
  const double rs[] = {0.01, 0.1, 0.3, 0.7, 0.95};
  for (int m : ms)
    for (double eta : etas)
      for (double r : rs) {
        const Lemma2Inputs in{r, m, eta};
        const double g = keyhole_kernel_integral(in, opt.tol);
        const double c = lemma2_bound(in);
        out.push_back(make_report("lemma2", g, c, 0.0,
                                  Params().add("m", m).add("eta", eta).add("r", r)));
        if (r * (m + 1.0) <= 1.0)
          out.push_back(make_report("lemma2_simplified", c, lemma2_simplified_bound(in), 1e-12 * c,
                                    Params().add("m", m).add("eta", eta).add("r", r)));
      }
  return out;
}

/// ||(f tau_m)(T)|| <= thm1_bound(C_eta, r, m, eta) * max |f| on the keyhole nodes.
inline std::vector<BoundReport> suite_thm1(const SuiteOptions& opt) {
  std::vector<Operator> ops;
  ops.push_back(diagonal_operator({0.9, 0.5}, "diag(0.9,0.5)"));
  for (auto& op : factory_suite())
    if (op.spec.kind == OperatorKind::jordan || op.spec.kind == OperatorKind::random_tr)
      ops.push_back(std::move(op));
  std::vector<BoundReport> out;
  std::mt19937_64 rng(opt.seed);
  for (const auto& op : ops) {
    const auto tr = tadmor_ritt_constant(op.matrix, opt.grid);
    const double theta = type_angle(tr.value);
    const double eta = (theta + pi / 2) / 2.0;
    const double c_eta = sector_constant(op.matrix, eta, theta, opt.grid).value;
    for (int m : {0, 2, 5}) {
      for (int k = 0; k < opt.samples; ++k) {
        const int deg = 1 + static_cast<int>(rng() % 6);
        const PolySpan f = k == 0 ? PolySpan(0, {1.0}) : random_span(0, deg, rng);
        const double r = default_contour(theta, m + f.n()).r;
        const auto rd = riesz_dunford(op.matrix, f, eta, r);
        const double lhs = op_norm2(mat_poly(f.shifted(m), op.matrix));
        const double rhs = thm1_bound(c_eta, {r, m, eta}) * rd.max_abs_f;
        out.push_back(make_report("thm1", lhs, rhs, 1e-9 * rhs,
                                  Params().add("operator", op.name).add("m", m).add("r", r)
                                      .add("eta", eta).add("c_eta", c_eta)));
      }
    }
  }
  return out;
}

/// ||p(T)|| <= thm2_bound(C, m, n, s) ||p||_D for random spans, the C(T,m,n)
/// search against the same bound, and the power bound for Pb.
inline std::vector<BoundReport> suite_thm2(const SuiteOptions& opt,
                                           const std::vector<ProfiledOperator>& ops,
                                           int ctm_budget = 48) {
  const std::pair<int, int> spans[] = {{0, 8}, {4, 64}, {32, 64}, {64, 64}};
  std::vector<BoundReport> out;
  for (const auto& po : ops) {
    const double C = po.profile.c_tr;
    std::mt19937_64 rng(opt.seed);
    for (const auto& [m, n] : spans) {
      const double bound = thm2_bound(C, m, n, opt.s);
      for (int k = 0; k < opt.samples; ++k) {
        const PolySpan p = random_span(m, n, rng);
        const double sup = sup_norm_disc(p);
        const double lhs = op_norm2(mat_poly(p, po.op.matrix));
        const double rhs = bound * sup;
        out.push_back(make_report("thm2", lhs, rhs, 1e-6 * rhs,
                                  Params().add("operator", po.op.name).add("m", m).add("n", n)
                                      .add("c_tr", C)));
      }
      const double ctm = ctm_search(po.op.matrix, m, n, ctm_budget, opt.seed);
      out.push_back(make_report("ctm_vs_thm2", ctm, bound, 1e-6,
                                Params().add("operator", po.op.name).add("m", m).add("n", n)));
    }
    out.push_back(make_report("power_bound", po.profile.pb, power_bound(C, opt.s), 0.0,
                              Params().add("operator", po.op.name).add("c_tr", C)));
  }
  return out;
}

/// Bernstein-type estimates on Stolz domains: part (i) for r in {1, 1.2} and
/// part (ii) for m in {1, 3}.
inline std::vector<BoundReport> suite_bernstein(const SuiteOptions& opt) {
  std::vector<BoundReport> out;
  std::mt19937_64 rng(opt.seed);
  for (double alpha : {pi / 6, pi / 4, pi / 3, pi / 2}) {
    for (int k = 0; k < opt.samples; ++k) {
      const int deg = 1 + static_cast<int>(rng() % 12);
      PolySpan p = random_span(0, deg, rng);
      const double s0 = sup_norm_disc(p);
      for (auto& c : p.coeffs) c /= s0;
      const double on_b = sup_norm_stolz(p, alpha);
      for (double r : {1.0, 1.2}) {
        const double lhs = sup_norm_stolz(p, alpha, r);
        const double rhs = std::pow(r / std::sin(alpha), p.n()) * on_b;
        out.push_back(make_report("bernstein_i", lhs, rhs, 1e-6 * std::max(1.0, rhs),
                                  Params().add("alpha", alpha).add("r", r).add("n", p.n())));
      }
      for (int m : {1, 3}) {
        const double ft = sup_norm_stolz(p.shifted(m), alpha);
        out.push_back(make_report("bernstein_ii_upper", ft, on_b, 1e-6 * std::max(1.0, on_b),
                                  Params().add("alpha", alpha).add("m", m)));
        const double rhs = std::pow(std::sin(alpha), -m) * ft;
        out.push_back(make_report("bernstein_ii_lower", on_b, rhs, 1e-6 * std::max(1.0, rhs),
                                  Params().add("alpha", alpha).add("m", m)));
      }
    }
  }
  return out;
}

/// Square-function lemma on diagonal and Jordan families, the diagonal closed
/// form, and the r-equivalence comparison.
inline std::vector<BoundReport> suite_sqfe(const SuiteOptions& opt) {
  std::vector<Operator> ops;
  OperatorSpec mult;
  mult.kind = OperatorKind::multiplier;
  mult.N = 32;
  ops.push_back(build_operator(mult));
  for (auto& op : factory_suite())
    if (op.spec.kind == OperatorKind::diagonal || op.spec.kind == OperatorKind::jordan)
      ops.push_back(std::move(op));
  ops.push_back(diagonal_operator({0.9, 0.5, 0.0, cplx(0.3, -0.4)}, "diag(0.9,0.5,0,0.3-0.4i)"));

  std::vector<BoundReport> out;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  for (const auto& op : ops) {
    const Eigen::Index d = op.matrix.rows();
    const auto dc = discrete_characteristics(op.matrix, opt.n_max);
    for (int m : {0, 1, 4, 16}) {
      for (double r : {0.5, 0.9, 0.99}) {
        const ComplexMatrix rT = r * op.matrix;
        const ComplexMatrix rTm = mat_pow(rT, m);
        const double bound = sfqe_lemma_bound(dc.pb, dc.c1, m, r);
        double worst_margin = INFINITY;
        BoundReport worst;
        for (int k = 0; k < opt.samples; ++k) {
          ComplexVector x(d);
          for (Eigen::Index i = 0; i < d; ++i) x(i) = cplx(normal(rng), normal(rng));
          const ComplexVector y = rTm * x;
          const double lhs = y.norm() > 0.0 ? square_norm(rT, y).value : 0.0;
          const double rhs = bound * x.norm();
          BoundReport rep = make_report("sqfe_lemma", lhs, rhs, 1e-9,
                                        Params().add("operator", op.name).add("m", m).add("r", r)
                                            .add("pb", dc.pb).add("c1", dc.c1));
          if (!rep.pass || rep.margin < worst_margin) {
            worst_margin = rep.margin;
            worst = rep;
          }
          if (!rep.pass) break;
        }
        out.push_back(worst);
      }
    }
    if (is_diagonal(op.matrix)) {
      for (int k = 0; k < opt.samples; ++k) {
        ComplexVector x(d);
        for (Eigen::Index i = 0; i < d; ++i) x(i) = cplx(normal(rng), normal(rng));
        const auto sn = square_norm(op.matrix, x);
        if (!sn.converged || !sn.closed_form) continue;
        const double cf2 = *sn.closed_form * *sn.closed_form;
        const double rel = std::abs(sn.value * sn.value - cf2) / std::max(cf2, 1e-300);
        out.push_back(make_report("sqfe_closed_form", rel, 1e-8, 0.0,
                                  Params().add("operator", op.name).add("terms", sn.terms_used)));
      }
    }
    ComplexVector x(d);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = cplx(normal(rng), normal(rng));
    const auto eq = r_equivalence_check(op.matrix, x, {0.5, 0.9, 0.99}, dc.pb);
    out.push_back(make_report("r_identity", eq.identity_residual, 1e-12, 0.0,
                              Params().add("operator", op.name)));
    out.push_back(eq.report);
  }
  return out;
}

/// Partition of unity of the windows, exact reconstruction and the Besov
/// bound on the factory operators for random polynomials of degree <= 256.
inline std::vector<BoundReport> suite_besov(const SuiteOptions& opt,
                                            const std::vector<ProfiledOperator>& ops,
                                            int max_degree = 256) {
  std::vector<BoundReport> out;
  long bad = 0;
  for (long long k = 0; k <= (1LL << 14); ++k) {
    const Dyadic s = window_sum(k, 16);
    if (s.num != (1LL << s.exp)) ++bad;
  }
  out.push_back(make_report("window_partition", static_cast<double>(bad), 0.0, 0.0,
                            Params().add("k_max", 1LL << 14)));

  std::mt19937_64 rng(opt.seed);
  std::vector<PolySpan> fs;
  std::vector<double> norms;
  for (int k = 0; k < opt.samples; ++k) {
    const int deg = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_degree));
    PolySpan f = random_span(0, deg, rng);
    for (auto& c : f.coeffs) c /= std::sqrt(static_cast<double>(deg));
    norms.push_back(besov_norm(f));
    fs.push_back(std::move(f));
  }
  for (const auto& po : ops) {
    double worst_rec = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto res = besov_calculus(po.op.matrix, fs[i], po.profile, norms[i]);
      out.push_back(res.report);
      out.back().inputs = Params().add("operator", po.op.name).str() + ";" + out.back().inputs;
      const ComplexMatrix direct = mat_poly(fs[i], po.op.matrix);
      const double rel = op_norm2(res.value - direct) / std::max(1.0, op_norm2(direct));
      worst_rec = std::max(worst_rec, rel);
    }
    out.push_back(make_report("besov_reconstruction", worst_rec, 1e-10, 0.0,
                              Params().add("operator", po.op.name)));
  }
  return out;
}

/// Profile consistency and resolvent-condition theorems: c_kreiss <= c_tr,
/// sector bound, scaling law, Spijker and Nikolski.
inline std::vector<BoundReport> suite_kreiss(const SuiteOptions& opt,
                                             const std::vector<ProfiledOperator>& ops,
                                             int spijker_per_n = 20, int nikolski_count = 20) {
  std::vector<BoundReport> out;
  for (const auto& po : ops) {
    const auto& p = po.profile;
    const std::string name = po.op.name;
    out.push_back(make_report("kreiss_le_tr", p.c_kreiss, p.c_tr, 0.0, Params().add("operator", name)));
    for (double eta = p.theta + 0.1; eta < pi / 2 + 1e-12; eta += 0.2) {
      const double e = std::min(eta, pi / 2);
      const double ce = sector_constant(po.op.matrix, e, p.theta, opt.grid).value;
      const double rhs = p.c_tr / (1.0 - std::cos(e) / std::cos(p.theta));
      out.push_back(make_report("sector_bound", ce, rhs, 1e-3,
                                Params().add("operator", name).add("eta", e)));
    }
    for (double r : {0.5, 0.9, 0.99}) {
      const double c = tadmor_ritt_constant(ComplexMatrix(r * po.op.matrix), opt.grid).value;
      out.push_back(make_report("scaling_law", c, 2.0 * p.c_tr / (1.0 + r), 1e-3,
                                Params().add("operator", name).add("r", r)));
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> th(0.2, 1.4), cap(1.0, 50.0);
  for (int N : {2, 4, 8, 16}) {
    for (int k = 0; k < spijker_per_n; ++k) {
      const Operator op = random_tr(N, th(rng), cap(rng), rng());
      const double ck = kreiss_constant(op.matrix, opt.grid).value;
      const auto dc = discrete_characteristics(op.matrix, opt.n_max);
      BoundReport r = spijker_check(dc.pb, ck, N);
      r.inputs += ";converged=" + std::string(dc.converged ? "1" : "0");
      out.push_back(r);
    }
  }
  const int sizes[] = {2, 4, 8, 16, 32};
  for (int k = 0; k < nikolski_count; ++k) {
    const int N = sizes[k % 5];
    const Operator op = unimodular_operator(N, 0.1 + 0.05 * (k % 4), rng());
    const double ck = kreiss_constant(op.matrix, opt.grid).value;
    out.push_back(nikolski_check(op.eigen->values, op.eigen->vectors, ck));
  }
  return out;
}

}  // namespace rittcalc
