// rittcalc command line: analyze | fcalc | verify <suite> | besov | sweep

#include <rittcalc/rittcalc.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

using namespace rittcalc;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kViolation = 4 };

struct Config {
  std::string grid = "default";
  double tol = 1e-8;
  std::uint64_t seed = 1;
  double eta = -1;  // < 0: derived from the profile
  double r = -1;
  double s = 0.5;
  long n_max = kDefaultNMax;
  int samples = 20;
  int kmax = 10;
  int budget = 32;
  std::string out;
  std::string format = "json";
  std::string matrix;
  std::string poly;
  std::string suite;
};

int grid_size(const Config& c) {
  if (c.grid == "default") return kDefaultGrid;
  std::size_t used = 0;
  int g = 0;
  try {
    g = std::stoi(c.grid, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != c.grid.size()) throw BadParameters("--grid expects an integer or 'default'");
  if (g < 64) throw BadParameters("--grid must be at least 64");
  return g;
}

void validate(const Config& c) {
  if (!(c.tol > 0.0)) throw BadParameters("--tol must be positive");
  if (c.n_max < 1) throw BadParameters("--n-max must be positive");
  if (c.samples < 1) throw BadParameters("--samples must be positive");
  grid_size(c);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
}

int emit_reports(const Config& c, const std::vector<BoundReport>& reps) {
  emit(c, c.format == "csv" ? reports_to_csv(reps) : reports_to_json(reps));
  return all_pass(reps) ? kOk : kViolation;
}

SuiteOptions suite_options(const Config& c) {
  SuiteOptions o;
  o.grid = grid_size(c);
  o.tol = c.tol;
  o.seed = c.seed;
  o.samples = c.samples;
  o.n_max = c.n_max;
  o.s = c.s;
  return o;
}

int cmd_analyze(const Config& c) {
  const ComplexMatrix T = parse_matrix(c.matrix);
  const auto p = profile_operator(T, grid_size(c), c.n_max);
  json j;
  j["operator"] = c.matrix;
  j["dim"] = T.rows();
  j["profile"] = profile_to_json(p);
  const auto k = sqfe_constant(T, c.samples, c.seed);
  const auto ka = sqfe_constant(T.adjoint(), c.samples, c.seed);
  j["sqfe"] = {{"K", k.value}, {"K_adjoint", ka.value}, {"exact", k.exact}};
  j["power_bound"] = power_bound(p.c_tr, c.s);
  emit(c, j.dump(2) + "\n");
  return kOk;
}

int cmd_fcalc(const Config& c) {
  if (c.poly.empty()) throw BadParameters("fcalc needs --poly");
  const ComplexMatrix T = parse_matrix(c.matrix);
  const PolySpan p = parse_poly(c.poly);
  double eta = c.eta, r = c.r;
  double theta = 0.0;
  if (eta < 0.0 || r < 0.0) {
    theta = type_angle(tadmor_ritt_constant(T, grid_size(c)).value);
    const auto d = default_contour(theta, p.n());
    if (eta < 0.0) eta = d.eta;
    if (r < 0.0) r = d.r;
  }
  RieszDunfordOptions opt;
  opt.tol = c.tol;
  const auto rd = riesz_dunford(T, p, eta, r, opt);
  const ComplexMatrix horner = mat_poly(p, T);
  const double rel = op_norm2(rd.value - horner) / std::max(1.0, op_norm2(horner));
  const BoundReport check = make_report("horner_agreement", rel, std::max(1e-7, 100.0 * c.tol), 0.0,
                                        Params().add("eta", eta).add("r", r).add("degree", p.n()));
  json j;
  j["value"] = matrix_to_json(rd.value);
  j["diagnostics"] = {{"eta", eta},
                      {"r", r},
                      {"tol", c.tol},
                      {"abs_tol", rd.abs_tol},
                      {"error_estimate", rd.error_estimate},
                      {"projection_residual", rd.projection_residual},
                      {"evaluations", rd.evaluations},
                      {"max_depth", rd.max_depth},
                      {"max_abs_f_on_contour", rd.max_abs_f}};
  j["check"] = report_to_json(check);
  emit(c, j.dump(2) + "\n");
  return check.pass ? kOk : kViolation;
}

int cmd_verify(const Config& c) {
  const SuiteOptions o = suite_options(c);
  std::vector<BoundReport> reps;
  if (c.suite == "lemma2") {
    reps = suite_lemma2(o);
  } else if (c.suite == "thm1") {
    reps = suite_thm1(o);
  } else if (c.suite == "thm2") {
    reps = suite_thm2(o, profiled_factory(o));
  } else if (c.suite == "bernstein") {
    reps = suite_bernstein(o);
  } else if (c.suite == "sqfe") {
    reps = suite_sqfe(o);
  } else if (c.suite == "besov") {
    reps = suite_besov(o, profiled_factory(o));
  } else if (c.suite == "kreiss") {
    reps = suite_kreiss(o, profiled_factory(o));
  } else {
    throw BadParameters("unknown suite '" + c.suite +
                        "' (lemma2 | thm1 | thm2 | bernstein | sqfe | besov | kreiss)");
  }
  return emit_reports(c, reps);
}

int cmd_besov(const Config& c) {
  if (c.poly.empty()) throw BadParameters("besov needs --poly");
  const ComplexMatrix T = parse_matrix(c.matrix);
  const PolySpan f = parse_poly(c.poly);
  const auto prof = profile_operator(T, grid_size(c), c.n_max);
  const auto res = besov_calculus(T, f, prof);
  if (c.format == "csv") return emit_reports(c, {res.report});
  json j;
  j["value"] = matrix_to_json(res.value);
  j["besov_norm"] = res.besov_norm;
  j["report"] = report_to_json(res.report);
  emit(c, j.dump(2) + "\n");
  return res.report.pass ? kOk : kViolation;
}

/// C(T,0,2^k) lower bounds against the Theorem-2 bound and the Theorem-3 envelope.
int cmd_sweep(const Config& c) {
  const ComplexMatrix T = parse_matrix(c.matrix);
  const auto prof = profile_operator(T, grid_size(c), c.n_max);
  auto sqfe_or_inf = [&](const ComplexMatrix& A) -> double {
    try {
      return sqfe_constant(A, c.samples, c.seed).value;
    } catch (const Divergence&) {
      return INFINITY;
    }
  };
  const double K = sqfe_or_inf(T);
  const double Ka = sqfe_or_inf(T.adjoint());
  std::vector<BoundReport> reps;
  double running = 0.0;
  for (int k = 1; k <= c.kmax; ++k) {
    const int n = 1 << k;
    running = std::max(running, ctm_search(T, 0, n, c.budget, c.seed));
    Params in;
    in.add("m", 0).add("n", n).add("c_tr", prof.c_tr);
    if (prof.c1 > 0.0 && std::isfinite(K)) in.add("envelope", thm3_envelope(K, prof.pb, prof.c1, 0, n));
    if (prof.c1 > 0.0 && std::isfinite(Ka))
      in.add("envelope_adjoint", thm3_envelope(Ka, prof.pb, prof.c1, 0, n));
    reps.push_back(make_report("ctm_sweep", running, thm2_bound(prof.c_tr, 0, n, c.s), 1e-6, in));
  }
  return emit_reports(c, reps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tadmor-Ritt operator analysis: constants, functional calculus and bound checks"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "angular grid size (>= 64) or 'default'");
    sub->add_option("--tol", cfg.tol, "quadrature tolerance");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--s", cfg.s, "Theorem-2 parameter s in (0,1)");
    sub->add_option("--n-max", cfg.n_max, "power scan cap for Pb and c1");
    sub->add_option("--samples", cfg.samples, "random draws per configuration");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* analyze = app.add_subcommand("analyze", "profile an operator");
  analyze->add_option("matrix", cfg.matrix, "matrix file (JSON or Matrix Market)")->required();
  common(analyze);

  auto* fcalc = app.add_subcommand("fcalc", "p(T) by the Riesz-Dunford integral");
  fcalc->add_option("matrix", cfg.matrix, "matrix file")->required();
  fcalc->add_option("--poly", cfg.poly, "polynomial JSON {\"m\":..,\"coeffs\":[..]}");
  fcalc->add_option("--eta", cfg.eta, "keyhole angle (default from the profile)");
  fcalc->add_option("--r", cfg.r, "keyhole radius (default 1/(n+1))");
  common(fcalc);

  auto* verify = app.add_subcommand("verify", "run an inequality suite");
  verify->add_option("suite", cfg.suite, "lemma2 | thm1 | thm2 | bernstein | sqfe | besov | kreiss")
      ->required();
  common(verify);

  auto* besov = app.add_subcommand("besov", "dyadic window calculus and the Besov bound");
  besov->add_option("matrix", cfg.matrix, "matrix file")->required();
  besov->add_option("--poly", cfg.poly, "polynomial JSON");
  common(besov);

  auto* sweep = app.add_subcommand("sweep", "C(T,0,2^k) search sweep");
  sweep->add_option("matrix", cfg.matrix, "matrix file")->required();
  sweep->add_option("--kmax", cfg.kmax, "largest k")->check(CLI::Range(1, 12));
  sweep->add_option("--budget", cfg.budget, "candidates per search")->check(CLI::PositiveNumber);
  common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    validate(cfg);
    if (*analyze) return cmd_analyze(cfg);
    if (*fcalc) return cmd_fcalc(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*besov) return cmd_besov(cfg);
    if (*sweep) return cmd_sweep(cfg);
  } catch (const Error& e) {
    std::cerr << "rittcalc: " << e.what() << "\n";
    return e.error_class() == ErrorClass::config ? kConfig : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "rittcalc: " << e.what() << "\n";
    return kNumerical;
  }
  return kConfig;
}
