#include "greenlab/oracle_suite.hpp"

#include <algorithm>
#include <cmath>

#include "greenlab/estimators.hpp"
#include "greenlab/rng.hpp"

namespace greenlab {

namespace {

Rational q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

CylinderFunction random_table(int d, int depth, std::uint64_t seed, std::uint64_t index) {
  Stream rng(seed, Purpose::oracle_tables, 1000 + index);
  std::size_t n = 1;
  for (int i = 0; i < depth; ++i) n *= static_cast<std::size_t>(d);
  std::vector<Rational> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(q(rng.below(13) - 6, 6));
  return CylinderFunction(d, depth, std::move(t));
}

std::vector<CylinderFunction> panel(std::uint64_t seed) {
  auto p = mirror_observables();
  p.push_back(CylinderFunction::indicator(2, {0, 1, 0}));
  p.push_back(random_table(2, 3, seed, 0));
  p.push_back(random_table(2, 4, seed, 1));
  p.push_back(random_table(3, 2, seed, 2));
  p.push_back(random_table(3, 3, seed, 3));
  p.push_back(random_table(5, 1, seed, 4));
  return p;
}

OracleCheck make(std::string name) {
  OracleCheck c;
  c.name = std::move(name);
  c.passed = true;
  return c;
}

void fail(OracleCheck& c, const std::string& why) {
  if (c.passed) c.detail = why;
  c.passed = false;
}

}  // namespace

std::vector<CylinderFunction> mirror_observables() {
  const CylinderFunction a = CylinderFunction::indicator(2, {0}).shifted(q(-1, 2));
  const CylinderFunction b = CylinderFunction::indicator(2, {0, 0}).shifted(q(-1, 4));
  std::vector<Rational> t;
  for (int v : {3, -1, 0, 2, -2, 1, 1, -4}) t.push_back(q(v, 4));
  return {a, b, CylinderFunction(2, 3, std::move(t))};
}

BinomialEnvelope binomial_ldt_envelope() {
  BinomialEnvelope env;
  const CylinderFunction ind = CylinderFunction::indicator(2, {0});
  std::vector<double> tail_d;
  for (int n = 4; n <= 64; ++n) {
    env.n.push_back(n);
    env.tail.push_back(shift_ldt_exact(ind, n, q(1, 4)));
    tail_d.push_back(env.tail.back().get_d());
  }
  fit_ldt_rate(env.n, tail_d, env.h);
  env.all_under = env.h > 0.0;
  for (std::size_t k = 0; k < env.n.size(); ++k) {
    env.all_under = env.all_under && tail_d[k] <= ldt_envelope(env.n[k], env.h) * (1.0 + 1e-12);
  }
  return env;
}

OracleSuiteReport run_oracle_suite(const OracleSuiteParams& params) {
  OracleSuiteReport rep;
  const auto fns = panel(params.seed);

  {
    OracleCheck c = make("adjoint_identity");
    for (const auto& phi : fns) {
      for (const auto& psi : fns) {
        if (phi.d() != psi.d()) continue;
        for (int n = 0; n <= 4; ++n) {
          ++c.cases;
          if (shift_correlation(phi, psi, n) != shift_correlation_adjoint(phi, psi, n)) {
            fail(c, "enumeration and adjoint forms differ at n = " + std::to_string(n));
          }
        }
      }
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("conditional_norm_identity");
    for (const auto& psi : fns) {
      for (int n = 0; n <= psi.depth() + 1; ++n) {
        ++c.cases;
        const CylinderFunction e = shift_conditional(psi, n);
        const CylinderFunction l = shift_transfer(psi, n);
        if (l2_norm_sq(e) != l2_norm_sq(l)) fail(c, "||E(psi|F_n)|| != ||Lambda^n psi||");
        if (!e.same_function(compose_shift(l, std::min(n, psi.depth())))) {
          fail(c, "E(psi|F_n) != (Lambda^n psi) o sigma^n");
        }
      }
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("transfer_reaches_mean");
    for (const auto& psi : fns) {
      ++c.cases;
      const CylinderFunction l = shift_transfer(psi, psi.depth());
      if (l.depth() != 0 || l[0] != psi.mean()) fail(c, "Lambda^depth psi is not the mean");
      const CylinderFunction one = CylinderFunction::constant(psi.d(), 1);
      if (!shift_transfer(one).same_function(one)) fail(c, "Lambda 1 != 1");
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("bennett_inequality");
    std::vector<Rational> nus, lambdas;
    for (int k = 1; k <= 20; ++k) nus.push_back(q(k, 21));
    for (int j = 0; j < 20; ++j) lambdas.push_back(q(j, 4));
    rep.bennett = bennett_check(Rational(1), nus, lambdas);
    c.cases = static_cast<int>(rep.bennett.cases.size());
    c.passed = rep.bennett.ok;
    c.detail = std::to_string(rep.bennett.proven) + " proven, " +
               std::to_string(rep.bennett.tight) + " tight, " +
               std::to_string(rep.bennett.violated) + " violated";
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("fiber_sets");
    for (int d : {2, 3, 5}) {
      rep.fiber_sets.push_back(fiber_set_check(d));
      c.cases += rep.fiber_sets.back().sets_checked;
      if (!rep.fiber_sets.back().ok) fail(c, "m(A and B) != (1 - 1/d) m(B) for d = " + std::to_string(d));
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("bounded_jacobian");
    for (auto [d, depth] : {std::pair{2, 4}, std::pair{3, 3}, std::pair{5, 2}}) {
      rep.jacobian.push_back(bounded_jacobian_check(d, depth));
      c.cases += rep.jacobian.back().sets_checked;
      if (!rep.jacobian.back().ok) fail(c, "kappa = d not attained or invariance fails, d = " + std::to_string(d));
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("exp_series_holder_chain");
    const Rational cc = 3;
    for (const Rational& theta : {q(1, 2), q(1, 3)}) {
      const int K = params.exp_series_depth;
      rep.exp_series.push_back(exp_series_check(
          cc, theta, std::vector<std::vector<Rational>>(K, std::vector<Rational>(kExpSeriesCells, Rational(1)))));
      rep.exp_series.push_back(exp_series_check(
          cc, theta, std::vector<std::vector<Rational>>(K, std::vector<Rational>(kExpSeriesCells, cc))));
      for (int f = 0; f < params.exp_series_families; ++f) {
        rep.exp_series.push_back(exp_series_check(cc, theta, K, params.seed + static_cast<std::uint64_t>(f)));
      }
    }
    for (const auto& r : rep.exp_series) {
      ++c.cases;
      if (!r.ok) fail(c, "Holder chain or final bound violated");
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("martingale_decomposition");
    for (const auto& psi : fns) {
      ++c.cases;
      const ShiftDecomposition dec = shift_martingale(psi);
      if (!dec.lambda_zero) fail(c, "Lambda psi' != 0");
      if (!dec.orthogonal) fail(c, "psi' o sigma^n not orthogonal");
      if (!dec.reconstructs) fail(c, "psi' + psi'' - psi'' o sigma != psi - <psi>");
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("gordin_finiteness");
    for (const auto& psi : fns) {
      ++c.cases;
      const auto terms = gordin_terms(psi);
      for (int n = psi.depth(); n < static_cast<int>(terms.size()); ++n) {
        if (terms[static_cast<std::size_t>(n)] != 0) fail(c, "nonzero term beyond the depth");
      }
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("multi_correlation");
    const std::pair<int, int> gaps[] = {{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 5}};
    for (std::size_t i = 0; i + 2 < fns.size(); ++i) {
      const auto& a = fns[i];
      const auto& b = fns[i + 1];
      const auto& e = fns[i + 2];
      if (a.d() != b.d() || b.d() != e.d()) continue;
      for (auto [n1, n2] : gaps) {
        ++c.cases;
        const Rational direct = shift_multi_correlation(a, b, e, n1, n2);
        const CylinderFunction tailf = b * compose_shift(e, n2 - n1);
        const Rational adj = inner(shift_transfer(a, n1), tailf) - a.mean() * b.mean() * e.mean();
        if (direct != adj) fail(c, "enumeration and adjoint forms differ");
      }
    }
    rep.checks.push_back(c);
  }
  {
    OracleCheck c = make("ldt_binomial_envelope");
    const CylinderFunction ind = CylinderFunction::indicator(2, {0});
    c.cases = 2;
    if (shift_ldt_exact(ind, 1, q(3, 5)) != 0) fail(c, "n = 1, eps = 3/5 tail != 0");
    if (shift_ldt_exact(ind, 4, q(1, 4)) != q(1, 8)) fail(c, "n = 4, eps = 1/4 tail != 1/8");
    const BinomialEnvelope env = binomial_ldt_envelope();
    rep.ldt_h = env.h;
    c.cases += static_cast<int>(env.n.size());
    if (!env.all_under) fail(c, "no single h > 0 bounds all exact tails");
    rep.checks.push_back(c);
  }

  rep.ok = true;
  for (const auto& c : rep.checks) rep.ok = rep.ok && c.passed;
  return rep;
}

}  // namespace greenlab
