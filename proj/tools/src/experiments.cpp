#include "greenlab_tools/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "greenlab/error.hpp"
#include "greenlab/lab.hpp"
#include "greenlab/measure.hpp"
#include "greenlab/moderate.hpp"
#include "greenlab/oracle_suite.hpp"
#include "greenlab/transfer.hpp"
#include "greenlab_tools/config.hpp"

namespace greenlab::tools {

namespace {

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::uint64_t seed_of(const json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

int int_at(const json& cfg, const char* section, const char* key) {
  return cfg.at(section).at(key).get<int>();
}

double num_at(const json& cfg, const char* section, const char* key) {
  return cfg.at(section).at(key).get<double>();
}

std::vector<double> doubles(const json& v, const std::string& field) {
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorCode::ConfigError, field + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> ints(const json& v, const std::string& field) {
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw Error(ErrorCode::ConfigError, field + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

TransferBudget budget_of(const json& cfg) {
  TransferBudget b;
  b.exact_depth_max = int_at(cfg, "budget", "exact_depth_max");
  b.mc_paths = int_at(cfg, "budget", "mc_paths");
  b.seed = seed_of(cfg);
  return b;
}

OrbitParams orbits_of(const json& cfg, const char* section) {
  OrbitParams o;
  o.n_orbits = int_at(cfg, section, "n_orbits");
  o.burn_in = int_at(cfg, "sampler", "burn_in");
  o.seed = seed_of(cfg);
  return o;
}

EmpiricalMeasure sample_of(const RationalMap& f, const json& cfg) {
  SamplerParams p;
  p.n_samples = int_at(cfg, "sampler", "n_samples");
  p.burn_in = int_at(cfg, "sampler", "burn_in");
  p.seed = seed_of(cfg);
  p.start = point_from_json(cfg.at("sampler").at("start"), "sampler.start");
  return sample_equilibrium(f, p);
}

std::string observable_name(const json& cfg, const char* section, const char* key) {
  return cfg.at(section).at(key).get<std::string>();
}

Artifact sample(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  Artifact a;
  a.name = "sample";
  json integrals = json::object();
  Table t{{"observable", "value", "std_err", "rejected"}, {}};
  for (auto it = cfg.at("observables").begin(); it != cfg.at("observables").end(); ++it) {
    const Integral in = integrate(mu, observable_from_config(cfg, it.key()));
    integrals[it.key()] = in;
    t.rows.push_back({it.key(), csv_number(in.value), csv_number(in.std_err),
                      std::to_string(in.rejected)});
    a.summary.push_back("<mu, " + it.key() + "> = " + fmt("%.6f +- %.2e", in.value, in.std_err));
  }
  const double dist = mean_distance_to_unit_circle(mu);
  a.report = document("sample", {{"meta", mu.meta},
                                 {"mean_distance_to_unit_circle", dist},
                                 {"integrals", integrals}});
  a.tables.emplace_back("sample", std::move(t));
  std::ostringstream csv;
  write_measure_csv(csv, mu);
  a.files.emplace_back("measure.csv", csv.str());
  a.files.emplace_back("measure.meta.json", document("measure_meta", mu.meta).dump(2) + "\n");
  a.summary.insert(a.summary.begin(), "samples: " + std::to_string(mu.size()) +
                                          ", burn_in " + std::to_string(mu.meta.burn_in));
  a.summary.push_back("mean chordal distance to |z| = 1: " + fmt("%.3e", dist));
  return a;
}

Artifact green(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const int n_iter = int_at(cfg, "green", "n_iter");
  Artifact a;
  a.name = "green";
  json rows = json::array();
  Table t{{"re", "im", "potential", "affine", "tail_bound"}, {}};
  const json& pts = cfg.at("green").at("points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string field = "green.points[" + std::to_string(i) + "]";
    const SpherePoint p = point_from_json(pts[i], field);
    const GreenValue g = green_function(f, p, n_iter);
    const Complex z = p.z();
    json row = g;
    row["point"] = {z.real(), z.imag()};
    rows.push_back(row);
    t.rows.push_back({csv_number(z.real()), csv_number(z.imag()), csv_number(g.potential),
                      csv_number(g.affine), csv_number(g.tail_bound)});
    a.summary.push_back("G(" + fmt("%g%+gi", z.real(), z.imag()) + ") = " +
                        fmt("%.12f (tail <= %.1e)", g.affine, g.tail_bound));
    if (!(g.tail_bound >= 0.0 && std::isfinite(g.tail_bound))) {
      a.failures.push_back(field + ": non-finite tail bound");
    }
  }
  a.report = document("green", {{"n_iter", n_iter}, {"points", rows}});
  a.tables.emplace_back("green", std::move(t));
  return a;
}

Artifact moderate(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const SpherePoint center = point_from_json(cfg.at("moderate").at("center"), "moderate.center");
  const double beta = num_at(cfg, "moderate", "beta");
  const Observable psi = Observable::log_singular(beta, center);
  const auto grid = doubles(cfg.at("moderate").at("m_grid"), "moderate.m_grid");
  const auto radii = doubles(cfg.at("moderate").at("radii"), "moderate.radii");
  const ModerateReport psh = psh_tail_exponent(mu, psi, grid);
  const BallMassReport ball = ball_mass_exponent(mu, center, radii);
  Artifact a;
  a.name = "moderate";
  a.report = document("moderate", {{"beta", beta}, {"psh", psh}, {"ball", ball}});
  a.tables.emplace_back("moderate", to_table(psh));
  a.tables.emplace_back("moderate_ball", to_table(ball));
  a.summary.push_back(psh.degenerate ? "psh tail: degenerate (all tails zero)"
                                     : "alpha' = " + fmt("%.4f +- %.4f", psh.alpha_hat,
                                                         psh.alpha_halfwidth));
  a.summary.push_back(ball.degenerate ? "ball mass: degenerate"
                                      : "alpha'' = " + fmt("%.4f +- %.4f", ball.alpha_hat,
                                                           ball.alpha_halfwidth));
  return a;
}

Artifact correlations(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const Observable phi = observable_from_config(cfg, observable_name(cfg, "correlations", "phi"));
  const Observable psi = observable_from_config(cfg, observable_name(cfg, "correlations", "psi"));
  CorrelationParams p;
  p.n_max = int_at(cfg, "correlations", "n_max");
  p.orbits = orbits_of(cfg, "correlations");
  p.budget = budget_of(cfg);
  p.forward = cfg.at("correlations").at("forward").get<bool>();
  const CorrelationReport r = correlation_series(f, mu, phi, psi, p);
  Artifact a;
  a.name = "correlations";
  a.report = document("correlations", r);
  a.tables.emplace_back("correlations", to_table(r));
  for (std::size_t i = 0; i < r.n_grid.size(); ++i) {
    a.summary.push_back("C_" + std::to_string(r.n_grid[i]) + " = " +
                        fmt("%+.6f +- %.2e", r.corr[i], r.corr_stderr[i]) + " (" + r.method[i] + ")");
    if (i < r.agree.size() && !r.agree[i]) {
      a.failures.push_back("forward and adjoint estimates disagree at n = " +
                           std::to_string(r.n_grid[i]));
    }
  }
  a.summary.push_back(r.claim ? "fitted rate " + fmt("%.4f +- %.4f", r.fitted_rate,
                                                    r.fitted_rate_halfwidth) +
                                    ", class rate " + fmt("%.4f", r.class_expected_rate)
                              : "no rate claim (fewer than 3 significant points)");
  if (!r.rate_ok) a.failures.push_back("fitted decay rate slower than the class rate");
  return a;
}

VarianceReport variance_of(const RationalMap& f, const EmpiricalMeasure& mu, const Observable& psi,
                           const json& cfg, bool birkhoff) {
  VarianceParams p;
  p.n_max = int_at(cfg, "variance", "n_max");
  if (birkhoff) {
    p.birkhoff_grid = ints(cfg.at("variance").at("birkhoff_grid"), "variance.birkhoff_grid");
  } else {
    p.birkhoff_grid.clear();
  }
  p.orbits = orbits_of(cfg, "variance");
  p.budget = budget_of(cfg);
  p.expansion_c = num_at(cfg, "variance", "expansion_c");
  return variance_sigma2(f, mu, psi, p);
}

Artifact variance(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const Observable psi = observable_from_config(cfg, observable_name(cfg, "variance", "observable"));
  const VarianceReport r = variance_of(f, mu, psi, cfg, true);
  Artifact a;
  a.name = "variance";
  a.report = document("variance", r);
  a.tables.emplace_back("variance", to_table(r));
  a.tables.emplace_back("variance_birkhoff", birkhoff_table(r));
  a.summary.push_back("sigma2 = " + fmt("%.6f +- %.2e", r.sigma2, r.sigma2_stderr));
  a.summary.push_back("gamma = " + fmt("%.6f +- %.2e", r.gamma, r.gamma_stderr));
  for (const auto& b : r.birkhoff_check) {
    a.summary.push_back("||S_" + std::to_string(b.n) + "||^2/n = " +
                        fmt("%.5f vs %.5f", b.value, b.predicted) + (b.ok ? "" : "  FAIL"));
    if (!b.ok) a.failures.push_back("Birkhoff check failed at n = " + std::to_string(b.n));
  }
  return a;
}

Artifact clt(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const Observable psi = observable_from_config(cfg, observable_name(cfg, "clt", "observable"));
  const VarianceReport var = variance_of(f, mu, psi, cfg, false);
  CltParams p;
  p.n = int_at(cfg, "clt", "n");
  p.orbits = orbits_of(cfg, "clt");
  p.coboundary_tol = num_at(cfg, "clt", "coboundary_tol");
  const CltReport r = clt_test(f, mu, psi, var, p);
  Artifact a;
  a.name = "clt";
  a.report = document("clt", {{"sigma2", var.sigma2}, {"sigma2_stderr", var.sigma2_stderr},
                              {"clt", r}});
  a.tables.emplace_back("clt", to_table(r));
  a.summary.push_back("sigma = " + fmt("%.6f", r.sigma) + ", KS distance " + fmt("%.4f", r.ks));
  return a;
}

Artifact ldt(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const Observable psi = observable_from_config(cfg, observable_name(cfg, "ldt", "observable"));
  LdtParams p;
  p.epsilon = num_at(cfg, "ldt", "epsilon");
  p.n_grid = ints(cfg.at("ldt").at("n_grid"), "ldt.n_grid");
  p.orbits = orbits_of(cfg, "ldt");
  const LdtReport r = ldt_tail(f, mu, psi, p);
  Artifact a;
  a.name = "ldt";
  a.report = document("ldt", r);
  a.tables.emplace_back("ldt", to_table(r));
  a.summary.push_back(r.h_fitted ? "h_eps = " + fmt("%.5f", r.h_eps_hat)
                                 : "no positive tail: h_eps not fitted");
  for (std::size_t i = 0; i < r.n_grid.size(); ++i) {
    a.summary.push_back("n = " + std::to_string(r.n_grid[i]) + ": tail " +
                        fmt("%.5f +- %.1e", r.tail[i], r.tail_stderr[i]));
    if (!r.envelope_ok[i]) {
      a.failures.push_back("tail above the envelope at n = " + std::to_string(r.n_grid[i]));
    }
  }
  if (!r.control_ok) a.failures.push_back("negative-control tail is nonzero");
  return a;
}

Artifact decompose(const json& cfg) {
  const RationalMap f = map_from_config(cfg);
  const EmpiricalMeasure mu = sample_of(f, cfg);
  const Observable psi =
      observable_from_config(cfg, observable_name(cfg, "decompose", "observable"));
  DecomposeParams dp;
  dp.tol = num_at(cfg, "decompose", "tol");
  dp.budget = budget_of(cfg);
  dp.max_points = int_at(cfg, "decompose", "max_points");
  const MartingaleDecomposition dec = martingale_decompose(f, psi, mu, dp);
  MartingaleCheckParams cp;
  cp.tol = dp.tol;
  cp.max_points = dp.max_points;
  cp.n_orbits = int_at(cfg, "decompose", "n_orbits");
  cp.burn_in = int_at(cfg, "sampler", "burn_in");
  cp.seed = seed_of(cfg);
  const MartingaleCheck check = check_martingale(f, mu, dec, cp);
  const ReconstructionCheck rec =
      check_reconstruction(f, psi, mu, dec, int_at(cfg, "decompose", "points"), dp.budget);
  Artifact a;
  a.name = "decompose";
  a.report = document("decompose", {{"decomposition", decomposition_json(dec)},
                                    {"martingale", check},
                                    {"reconstruction", rec}});
  Table t{{"n", "norm"}, {}};
  for (std::size_t n = 0; n < dec.norms.size(); ++n) {
    t.rows.push_back({std::to_string(n), csv_number(dec.norms[n])});
  }
  a.tables.emplace_back("decompose", std::move(t));
  a.summary.push_back("N = " + std::to_string(dec.truncation_N) + ", tail bound " +
                      fmt("%.2e", dec.tail_bound));
  a.summary.push_back("||Lambda psi'|| = " + fmt("%.2e +- %.2e", check.lambda_norm,
                                                 check.lambda_norm_stderr));
  a.summary.push_back("reconstruction max error " + fmt("%.2e", rec.max_error) + " at " +
                      std::to_string(rec.points) + " points");
  if (!check.lambda_ok) a.failures.push_back("Lambda psi' is not zero");
  for (const auto& pr : check.orthogonality) {
    if (!pr.ok) {
      a.failures.push_back("psi' o f^" + std::to_string(pr.a) + " and psi' o f^" +
                           std::to_string(pr.b) + " are not orthogonal");
    }
  }
  if (!rec.ok) a.failures.push_back("reconstruction identity exceeds the tail bound");
  return a;
}

Artifact oracle_suite(const json& cfg) {
  OracleSuiteParams p;
  p.seed = seed_of(cfg);
  p.exp_series_families = int_at(cfg, "oracle_suite", "exp_series_families");
  p.exp_series_depth = int_at(cfg, "oracle_suite", "exp_series_depth");
  const OracleSuiteReport r = run_oracle_suite(p);
  Artifact a;
  a.name = "oracle-suite";
  a.report = document("oracle_suite", r);
  a.tables.emplace_back("oracle-suite", to_table(r));
  for (const auto& c : r.checks) {
    a.summary.push_back((c.passed ? "pass  " : "FAIL  ") + c.name + " (" +
                        std::to_string(c.cases) + " cases)" +
                        (c.detail.empty() ? "" : ": " + c.detail));
    if (!c.passed) a.failures.push_back(c.name);
  }
  return a;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + p.string() + "'");
  out << content;
}

}  // namespace

Artifact run_subcommand(const std::string& name, const json& cfg) {
  if (name == "sample") return sample(cfg);
  if (name == "green") return green(cfg);
  if (name == "moderate") return moderate(cfg);
  if (name == "correlations") return correlations(cfg);
  if (name == "variance") return variance(cfg);
  if (name == "clt") return clt(cfg);
  if (name == "ldt") return ldt(cfg);
  if (name == "decompose") return decompose(cfg);
  if (name == "oracle-suite") return oracle_suite(cfg);
  throw Error(ErrorCode::ConfigError, "unknown subcommand '" + name + "'");
}

std::string summary_text(const Artifact& a) {
  std::string s = "greenlab " + a.name + "\n";
  for (const auto& line : a.summary) s += "  " + line + "\n";
  if (a.pass()) {
    s += "status: PASS\n";
  } else {
    s += "status: FAIL\n";
    for (const auto& f : a.failures) s += "  failed: " + f + "\n";
  }
  return s;
}

void write_artifact(const Artifact& a, const json& cfg, const std::filesystem::path& dir,
                    Format format) {
  std::filesystem::create_directories(dir);
  if (format != Format::csv) write_file(dir / (a.name + ".json"), a.report.dump(2) + "\n");
  if (format != Format::json) {
    for (const auto& [stem, table] : a.tables) {
      std::ostringstream os;
      write_csv(os, table);
      write_file(dir / (stem + ".csv"), os.str());
    }
  }
  for (const auto& [file, content] : a.files) write_file(dir / file, content);
  write_file(dir / "summary.txt", summary_text(a));
  write_file(dir / "config.resolved.json", cfg.dump(2) + "\n");
}

}  // namespace greenlab::tools
