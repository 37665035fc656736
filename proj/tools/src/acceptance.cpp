#include "greenlab_tools/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/estimators.hpp"
#include "greenlab/io.hpp"
#include "greenlab/lab.hpp"
#include "greenlab/measure.hpp"
#include "greenlab/moderate.hpp"
#include "greenlab/oracle_suite.hpp"
#include "greenlab/parallel.hpp"
#include "greenlab/shift.hpp"
#include "greenlab/transfer.hpp"

namespace greenlab::tools {

namespace {

constexpr int kSamples = 100000;
constexpr int kBurnIn = 50;

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

RationalMap z_squared() { return make_rational_map({0.0, 0.0, 1.0}, {1.0}); }
RationalMap basilica() { return make_rational_map({-1.0, 0.0, 1.0}, {1.0}); }

EmpiricalMeasure cloud(const RationalMap& f, std::uint64_t seed) {
  return sample_equilibrium(f, kSamples, kBurnIn, seed);
}

Observable re_z() { return Observable::trig_poly({0.0, 1.0}); }
Observable re_z2() { return Observable::trig_poly({0.0, 0.0, 1.0}); }

// One Monte-Carlo estimate against an exact value.
struct Comparison {
  std::string observable;
  std::string quantity;
  int n = 0;
  double estimate = 0.0;
  double std_err = 0.0;
  double exact = 0.0;
  bool ok = false;
};

json comparison_json(const Comparison& c) {
  return {{"observable", c.observable}, {"quantity", c.quantity}, {"n", c.n},
          {"estimate", c.estimate},     {"std_err", c.std_err},   {"exact", c.exact},
          {"ok", c.ok}};
}

// |estimate - exact| <= 3 stderr; the 1e-12 absorbs binary rounding of
// estimates whose sampling variance is exactly zero.
Comparison compare(std::string obs, std::string quantity, int n, double est, double se,
                   const Rational& exact) {
  Comparison c{std::move(obs), std::move(quantity), n, est, se, exact.get_d(), false};
  c.ok = std::abs(c.estimate - c.exact) <= 3.0 * se + 1e-12;
  return c;
}

CriterionResult criterion_oracle(std::uint64_t seed) {
  CriterionResult r;
  OracleSuiteParams p;
  p.seed = seed;
  const OracleSuiteReport rep = run_oracle_suite(p);
  r.data = rep;
  r.pass = rep.ok;
  int cases = 0;
  std::string failed;
  for (const auto& c : rep.checks) {
    cases += c.cases;
    if (!c.passed) failed += " " + c.name;
  }
  r.detail = std::to_string(rep.checks.size()) + " exact checks, " + std::to_string(cases) +
             " cases" + (failed.empty() ? "" : "; failed:" + failed);
  return r;
}

CriterionResult criterion_mirror(std::uint64_t seed) {
  CriterionResult r;
  const ShiftSystem sys(2);
  const ShiftSystem::Point start = 0;
  const auto pts = sample_cloud(sys, start, kSamples, kBurnIn, seed, Purpose::shift_mirror);
  const std::span<const ShiftSystem::Point> cl(pts);
  const auto mirrors = mirror_observables();
  const char* names[] = {"1{x1=0}-1/2", "1{x1=x2=0}-1/4", "depth3_table"};
  const Rational eps(3, 20);

  std::vector<Comparison> all;
  for (std::size_t k = 0; k < mirrors.size(); ++k) {
    const CylinderFunction& c = mirrors[k];
    const ShiftObservable obs(c);
    const std::string name = names[k];
    const Rational m = c.mean();
    const CylinderFunction centered = c.shifted(-m);

    CorrelationParams cp;
    cp.n_max = 2;
    cp.orbits = {kSamples, kBurnIn, seed};
    cp.budget.seed = seed;
    const CorrelationReport corr = correlation_series(sys, cl, start, obs, obs, cp);
    for (int n = 0; n <= 2; ++n) {
      const Rational exact = shift_correlation(c, c, n);
      const auto i = static_cast<std::size_t>(n);
      all.push_back(compare(name, "correlation_adjoint", n, corr.adjoint[i], corr.adjoint_stderr[i], exact));
      all.push_back(compare(name, "correlation_forward", n, corr.forward[i], corr.forward_stderr[i], exact));
    }

    VarianceParams vp;
    vp.n_max = 4;
    vp.birkhoff_grid = {8, 16};
    vp.orbits = {kSamples, kBurnIn, seed};
    vp.budget.seed = seed;
    const VarianceReport var = variance_sigma2(sys, cl, start, obs, vp);
    Rational sigma2 = 0, gamma = 0;
    for (int n = 0; n <= c.depth(); ++n) {
      const Rational cn = shift_correlation(c, c, n);
      sigma2 += n == 0 ? cn : 2 * cn;
      gamma += 2 * n * cn;
    }
    all.push_back(compare(name, "sigma2", 0, var.sigma2, var.sigma2_stderr, sigma2));
    for (const auto& b : var.birkhoff_check) {
      const Rational exact = sigma2 - gamma / b.n;
      all.push_back(compare(name, "birkhoff_variance", b.n, b.value, b.std_err, exact));
    }

    const ShiftObservable* list[] = {&obs};
    const LevelTable t = cloud_levels(sys, cl, std::span<const ShiftObservable* const>(list), 1, {});
    for (int n = 0; n <= 1; ++n) {
      MeanAccumulator acc;
      const double md = m.get_d();
      for (std::size_t i = 0; i < t.points(); ++i) {
        const double v = t.at(i, 0, n) - md;
        acc.add(v * v);
      }
      const Rational exact = l2_norm_sq(shift_conditional(centered, n));
      all.push_back(compare(name, "conditional_norm_sq", n, acc.mean(), acc.std_err(), exact));
    }

    LdtParams lp;
    lp.epsilon = eps.get_d();
    lp.n_grid = {8, 16};
    lp.orbits = {kSamples, kBurnIn, seed};
    const LdtReport ldt = ldt_tail(sys, start, obs, m.get_d(), lp);
    for (std::size_t i = 0; i < ldt.n_grid.size(); ++i) {
      const Rational exact = shift_ldt_exact(c, ldt.n_grid[i], eps);
      all.push_back(compare(name, "ldt_tail", ldt.n_grid[i], ldt.tail[i], ldt.tail_stderr[i], exact));
    }
  }

  json rows = json::array();
  int bad = 0;
  double worst = 0.0;
  for (const auto& c : all) {
    rows.push_back(comparison_json(c));
    bad += !c.ok;
    if (c.std_err > 0.0) worst = std::max(worst, std::abs(c.estimate - c.exact) / c.std_err);
  }
  r.data = {{"samples", kSamples}, {"comparisons", rows}};
  r.pass = bad == 0;
  r.detail = std::to_string(all.size()) + " estimates on 3 observables, " + std::to_string(bad) +
             " outside 3 stderr, worst " + fmt("%.2f stderr", worst);
  return r;
}

CriterionResult criterion_sampler(std::uint64_t seed) {
  CriterionResult r;
  const EmpiricalMeasure mu = cloud(z_squared(), seed);
  const double dist = mean_distance_to_unit_circle(mu);
  std::vector<double> u;
  u.reserve(mu.size());
  for (const auto& p : mu.points) {
    const double a = std::arg(p.z()) / (2.0 * std::numbers::pi);
    u.push_back(a < 0.0 ? a + 1.0 : a);
  }
  const double ks = ks_distance_uniform(u, 0.0, 1.0);
  r.data = {{"meta", mu.meta}, {"mean_distance_to_unit_circle", dist}, {"angular_ks", ks}};
  r.pass = dist < 1e-6 && ks < 0.01;
  r.detail = "mean distance " + fmt("%.2e", dist) + ", angular KS " + fmt("%.4f", ks);
  return r;
}

CriterionResult criterion_moderate(std::uint64_t seed) {
  CriterionResult r;
  const EmpiricalMeasure mu = cloud(z_squared(), seed);
  const SpherePoint one = SpherePoint::from_z({1.0, 0.0});
  std::vector<double> g1, g2;
  for (int i = 0; i <= 14; ++i) g1.push_back(1.0 + 0.5 * i);
  for (int i = 0; i <= 14; ++i) g2.push_back(2.0 + 1.0 * i);
  const ModerateReport a1 = psh_tail_exponent(mu, Observable::log_singular(1.0, one), g1);
  const ModerateReport a2 = psh_tail_exponent(mu, Observable::log_singular(2.0, one), g2);
  std::vector<double> radii;
  for (int i = 0; i < 20; ++i) radii.push_back(0.2 * std::pow(5e-4 / 0.2, i / 19.0));
  const BallMassReport ball = ball_mass_exponent(mu, one, radii);

  // Closed-form arc measure of {beta log chordal(z, 1) < -M} on the circle.
  auto oracle = [](const ModerateReport& rep, double beta) {
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.m_grid.size(); ++i) {
      const double exact = 2.0 / std::numbers::pi * std::asin(std::exp(-rep.m_grid[i] / beta));
      const double z = rep.tail_stderr[i] > 0 ? (rep.tail[i] - exact) / rep.tail_stderr[i] : 0.0;
      worst = std::max(worst, std::abs(z));
      rows.push_back({{"M", rep.m_grid[i]}, {"tail", rep.tail[i]}, {"exact", exact}, {"z", z}});
    }
    return std::pair{rows, worst};
  };
  const auto [o1, w1] = oracle(a1, 1.0);
  const auto [o2, w2] = oracle(a2, 2.0);
  r.data = {{"beta1", a1}, {"beta2", a2}, {"ball", ball}, {"oracle_beta1", o1}, {"oracle_beta2", o2}};
  const bool ok1 = !a1.degenerate && a1.alpha_hat >= 0.85 && a1.alpha_hat <= 1.15;
  const bool ok2 = !a2.degenerate && a2.alpha_hat >= 0.4 && a2.alpha_hat <= 0.6;
  const bool ok3 = !ball.degenerate && ball.alpha_hat >= 0.85 && ball.alpha_hat <= 1.15;
  r.pass = ok1 && ok2 && ok3;
  r.detail = "alpha'(log) " + fmt("%.4f", a1.alpha_hat) + ", alpha'(2 log) " +
             fmt("%.4f", a2.alpha_hat) + ", alpha'' " + fmt("%.4f", ball.alpha_hat) +
             "; arc oracle worst " + fmt("%.1f / %.1f stderr", w1, w2);
  return r;
}

CriterionResult criterion_mixing(std::uint64_t seed) {
  CriterionResult r;
  const RationalMap f = z_squared();
  const EmpiricalMeasure mu = cloud(f, seed);
  CorrelationParams cp;
  cp.n_max = 8;
  cp.orbits = {kSamples, kBurnIn, seed};
  cp.budget.seed = seed;
  const CorrelationReport c = correlation_series(f, mu, re_z2(), re_z(), cp);
  bool ok = std::abs(c.corr[1] - 0.5) <= 3.0 * c.corr_stderr[1];
  double worst = 0.0;
  for (std::size_t n = 2; n < c.corr.size(); ++n) {
    ok = ok && std::abs(c.corr[n]) <= 5.0 * c.corr_stderr[n];
    worst = std::max(worst, std::abs(c.corr[n]) / c.corr_stderr[n]);
  }

  const RationalMap g = basilica();
  const EmpiricalMeasure nu = cloud(g, seed);
  const SpherePoint beta_fixed = SpherePoint::from_z({(1.0 + std::sqrt(5.0)) / 2.0, 0.0});
  const CorrelationReport d =
      correlation_series(g, nu, Observable::log_singular(1.0, beta_fixed), re_z(), cp);
  const bool decay_ok = !d.claim || d.fitted_rate <= -0.8 * std::log(2.0);
  r.data = {{"z2", c}, {"basilica", d}};
  r.pass = ok && decay_ok;
  r.detail = "C_1 = " + fmt("%.4f +- %.4f", c.corr[1], c.corr_stderr[1]) +
             ", max |C_n|/stderr (n>=2) " + fmt("%.2f", worst) + "; z^2-1: " +
             (d.claim ? "rate " + fmt("%.3f (bound %.3f)", d.fitted_rate, -0.8 * std::log(2.0))
                      : "no claim (" + std::to_string(d.fit_points) + " significant points)");
  return r;
}

CriterionResult criterion_variance(std::uint64_t seed) {
  CriterionResult r;
  const RationalMap f = z_squared();
  const EmpiricalMeasure mu = cloud(f, seed);
  VarianceParams vp;
  vp.n_max = 8;
  vp.birkhoff_grid = {8, 16, 32};
  vp.orbits = {kSamples, kBurnIn, seed};
  vp.budget.seed = seed;
  const Observable psi = linear_combination({{1.0, re_z()}, {1.0, re_z2()}});
  const VarianceReport v = variance_sigma2(f, mu, psi, vp);
  r.data = v;
  r.pass = !v.birkhoff_check.empty();
  std::string rows;
  for (const auto& b : v.birkhoff_check) {
    r.pass = r.pass && b.ok;
    rows += " n=" + std::to_string(b.n) + ":" + fmt("%.2f", std::abs(b.residual) / b.allowed);
  }
  r.detail = "sigma2 " + fmt("%.4f", v.sigma2) + ", gamma " + fmt("%.4f", v.gamma) +
             "; |residual|/allowed" + rows;
  return r;
}

CriterionResult criterion_clt(std::uint64_t seed) {
  CriterionResult r;
  const RationalMap f = z_squared();
  const EmpiricalMeasure mu = cloud(f, seed);
  VarianceParams vp;
  vp.birkhoff_grid.clear();
  vp.budget.seed = seed;
  const VarianceReport var = variance_sigma2(f, mu, re_z(), vp);
  CltParams cp;
  cp.n = 1024;
  cp.orbits = {kSamples, kBurnIn, seed};
  cp.reference_sigma = std::sqrt(0.5);
  const CltReport clt = clt_test(f, mu, re_z(), var, cp);

  const Observable cob = linear_combination({{1.0, re_z()}, {-1.0, re_z2()}});
  const VarianceReport cv = variance_sigma2(f, mu, cob, vp);
  bool detected = false;
  std::string message;
  try {
    CltParams cc = cp;
    cc.orbits.n_orbits = 1;
    clt_test(f, mu, cob, cv, cc);
  } catch (const Error& e) {
    detected = e.code() == ErrorCode::CoboundaryDetected;
    message = e.what();
  }
  r.data = {{"clt", clt}, {"sigma2", var.sigma2},
            {"coboundary", {{"sigma2", cv.sigma2}, {"sigma2_stderr", cv.sigma2_stderr},
                            {"detected", detected}, {"message", message}}}};
  r.pass = clt.ks < 0.05 && detected && std::abs(cv.sigma2) < 0.01;
  r.detail = "KS " + fmt("%.4f", clt.ks) + " vs N(0, sqrt 0.5); coboundary sigma2 " +
             fmt("%.2e", cv.sigma2) + (detected ? ", CoboundaryDetected" : ", NOT detected");
  return r;
}

CriterionResult criterion_ldt(std::uint64_t seed) {
  CriterionResult r;
  const BinomialEnvelope env = binomial_ldt_envelope();
  const RationalMap f = z_squared();
  const EmpiricalMeasure mu = cloud(f, seed);
  LdtParams lp;
  lp.epsilon = 0.2;
  lp.n_grid = {16, 32, 64};
  lp.orbits = {kSamples, kBurnIn, seed};
  const LdtReport mc = ldt_tail(f, mu, re_z(), lp);
  json exact = json::array();
  for (std::size_t i = 0; i < env.n.size(); ++i) {
    exact.push_back({{"n", env.n[i]}, {"tail", rational_json(env.tail[i])},
                     {"envelope", ldt_envelope(env.n[i], env.h)}});
  }
  bool mc_ok = true;
  json rows = json::array();
  std::string detail;
  for (std::size_t i = 0; i < mc.n_grid.size(); ++i) {
    const double curve = ldt_envelope(mc.n_grid[i], env.h);
    const bool ok = mc.tail[i] <= curve + 3.0 * mc.tail_stderr[i];
    mc_ok = mc_ok && ok;
    rows.push_back({{"n", mc.n_grid[i]}, {"tail", mc.tail[i]}, {"std_err", mc.tail_stderr[i]},
                    {"curve", curve}, {"ok", ok}});
    detail += " " + std::to_string(mc.n_grid[i]) + ":" + fmt("%.3f<=%.3f", mc.tail[i], curve);
  }
  r.data = {{"h", env.h}, {"exact", exact}, {"monte_carlo", mc}, {"against_curve", rows}};
  r.pass = env.all_under && mc_ok;
  r.detail = "h = " + fmt("%.4f", env.h) + (env.all_under ? " bounds all exact tails" : " FAILS") +
             ";" + detail;
  return r;
}

CriterionResult criterion_martingale(std::uint64_t seed) {
  CriterionResult r;
  const RationalMap f = z_squared();
  const EmpiricalMeasure mu = cloud(f, seed);
  const Observable psi = re_z2();
  DecomposeParams dp;
  dp.budget.seed = seed;
  const MartingaleDecomposition dec = martingale_decompose(f, psi, mu, dp);
  MartingaleCheckParams cp;
  cp.seed = seed;
  const MartingaleCheck check = check_martingale(f, mu, dec, cp);
  const ReconstructionCheck rec = check_reconstruction(f, psi, mu, dec, 100, dp.budget);
  bool shift_ok = true;
  json shift = json::array();
  for (const auto& c : mirror_observables()) {
    const ShiftDecomposition s = shift_martingale(c);
    shift_ok = shift_ok && s.lambda_zero && s.orthogonal && s.reconstructs;
    shift.push_back({{"psi", cylinder_json(c)},
                     {"psi_prime", cylinder_json(s.psi_prime)},
                     {"psi_dblprime", cylinder_json(s.psi_dblprime)},
                     {"N", s.truncation_N},
                     {"lambda_zero", s.lambda_zero},
                     {"orthogonal", s.orthogonal},
                     {"reconstructs", s.reconstructs}});
  }
  const bool lambda_ok = check.lambda_norm <= std::max(1e-6, 5.0 * check.lambda_norm_stderr);
  r.data = {{"decomposition", decomposition_json(dec)}, {"martingale", check},
            {"reconstruction", rec}, {"shift", shift}};
  r.pass = lambda_ok && rec.ok && rec.points == 100 && shift_ok;
  r.detail = "N = " + std::to_string(dec.truncation_N) + ", ||Lambda psi'|| " +
             fmt("%.2e", check.lambda_norm) + ", reconstruction " +
             fmt("%.1e <= %.1e", rec.max_error, rec.tail_bound) +
             (shift_ok ? ", shift mirror exact" : ", shift mirror FAILS");
  return r;
}

struct CriterionDef {
  const char* title;
  double budget;
  CriterionResult (*fn)(std::uint64_t);
};

const CriterionDef kCriterionDefs[] = {
    {"oracle exactness", 10.0, criterion_oracle},
    {"estimator validation on shift mirrors", 120.0, criterion_mirror},
    {"equilibrium sampler for z^2", 30.0, criterion_sampler},
    {"moderateness exponents", 60.0, criterion_moderate},
    {"mixing rates", 120.0, criterion_mixing},
    {"variance expansion", 120.0, criterion_variance},
    {"central limit theorem", 180.0, criterion_clt},
    {"large deviations", 180.0, criterion_ldt},
    {"martingale decomposition", 60.0, criterion_martingale},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > 9) throw Error(ErrorCode::InvalidParams, "criterion id must be in 1..9");
  const CriterionDef& s = kCriterionDefs[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = s.fn(seed);
  } catch (const Error& e) {
    r.pass = false;
    r.detail = std::string(to_string(e.code())) + ": " + e.what();
    r.data = {{"error", r.detail}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.id = id;
  r.title = s.title;
  r.budget_seconds = s.budget;
  if (r.seconds >= s.budget) {
    r.pass = false;
    r.detail += "; runtime over budget";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(
    std::uint64_t seed, const std::vector<int>& only,
    const std::function<void(const CriterionResult&)>& on_result) {
  auto wanted = [&](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };
  const int saved = workers();
  std::vector<CriterionResult> out;
  std::vector<CriterionResult> baseline;
  set_workers(1);
  const bool determinism = wanted(kCriteria);
  std::vector<int> ids;
  for (int id = 1; id < kCriteria; ++id) {
    if (wanted(id)) ids.push_back(id);
  }
  if (ids.empty() && determinism) {
    for (int id = 1; id < kCriteria; ++id) ids.push_back(id);
  }
  for (int id : ids) {
    CriterionResult r = run_criterion(id, seed);
    if (wanted(id)) {
      out.push_back(r);
      if (on_result) on_result(r);
    }
    baseline.push_back(std::move(r));
  }
  if (determinism) {
    CriterionResult d;
    d.id = kCriteria;
    d.title = "determinism across worker counts";
    d.pass = !baseline.empty();
    const auto t0 = std::chrono::steady_clock::now();
    set_workers(4);
    json rows = json::array();
    std::string mismatched;
    for (const auto& b : baseline) {
      const CriterionResult again = run_criterion(b.id, seed);
      const bool same = again.data.dump() == b.data.dump();
      d.pass = d.pass && same;
      rows.push_back({{"criterion", b.id}, {"identical", same}});
      if (!same) mismatched += " " + std::to_string(b.id);
    }
    set_workers(1);
    d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d.data = {{"workers", {1, 4}}, {"criteria", rows}};
    d.detail = std::to_string(baseline.size()) + " criteria rerun with 4 workers" +
               (mismatched.empty() ? ", outputs bit-identical" : "; differing:" + mismatched);
    out.push_back(d);
    if (on_result) on_result(d);
  }
  set_workers(saved);
  return out;
}

std::string result_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s criterion %2d ", r.pass ? "PASS" : "FAIL", r.id);
  char tail[64];
  std::snprintf(tail, sizeof tail, " [%.1f s]", r.seconds);
  return std::string(buf) + r.title + ": " + r.detail + tail;
}

}  // namespace greenlab::tools
