#include <gtest/gtest.h>

#include "greenlab/error.hpp"
#include "greenlab/estimators.hpp"
#include "greenlab/oracle_suite.hpp"
#include "greenlab/shift.hpp"
#include "oracles.hpp"

using namespace greenlab;

namespace {

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

CylinderFunction table(int d, int depth, std::vector<long> nums, long den) {
  std::vector<Rational> t;
  for (long v : nums) t.push_back(q(v, den));
  return CylinderFunction(d, depth, std::move(t));
}

}  // namespace

TEST(Cylinder, IndicatorAndMean) {
  const CylinderFunction a = CylinderFunction::indicator(3, {2, 0});
  EXPECT_EQ(a.depth(), 2);
  EXPECT_EQ(a.mean(), q(1, 9));
  EXPECT_EQ(a[2 * 3 + 0], 1);
  EXPECT_EQ(a[0], 0);
}

TEST(Cylinder, ExtendAndReduceRoundTrip) {
  const CylinderFunction a = table(2, 2, {1, 2, 3, 4}, 5);
  const CylinderFunction e = a.extend(4);
  EXPECT_EQ(e.depth(), 4);
  EXPECT_TRUE(e.same_function(a));
  EXPECT_EQ(e.reduced().depth(), 2);
  EXPECT_EQ(CylinderFunction::indicator(2, {0}).extend(3).reduced().depth(), 1);
  EXPECT_EQ(CylinderFunction::constant(2, 7).extend(3).reduced().depth(), 0);
}

TEST(Cylinder, ArithmeticIsPointwise) {
  const CylinderFunction a = table(2, 1, {1, 3}, 1);
  const CylinderFunction b = table(2, 2, {1, 0, 0, 1}, 2);
  const CylinderFunction s = a * b + a.scaled(2) - b;
  const std::vector<int> words[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (const auto& w : words) {
    const Rational av = a.value(w), bv = b.value(w);
    EXPECT_EQ(s.value(w), av * bv + 2 * av - bv);
  }
}

TEST(ShiftTransfer, Examples) {
  // Lambda (1{x1=x2=0} - 1/4) = 1/2 1{x1=0} - 1/4.
  const CylinderFunction b = CylinderFunction::indicator(2, {0, 0}).shifted(q(-1, 4));
  const CylinderFunction expected = CylinderFunction::indicator(2, {0}).scaled(q(1, 2)).shifted(q(-1, 4));
  EXPECT_TRUE(shift_transfer(b).same_function(expected));
  const CylinderFunction a = CylinderFunction::indicator(2, {0}).shifted(q(-1, 2));
  EXPECT_TRUE(shift_transfer(a).is_zero());
}

TEST(ShiftTransfer, IsAdjointToComposition) {
  const CylinderFunction phi = table(3, 2, {1, -2, 0, 4, 1, 1, -3, 2, 5}, 7);
  const CylinderFunction psi = table(3, 2, {0, 1, 2, 3, 4, 5, 6, 7, 8}, 3);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(inner(shift_transfer(phi, n), psi), inner(phi, compose_shift(psi, n))) << n;
  }
}

TEST(ShiftCorrelation, MatchesBruteForceEnumeration) {
  const std::vector<long> pn{3, -1, 0, 2, -2, 1, 1, -4};
  const CylinderFunction c = table(2, 3, pn, 4);
  const CylinderFunction b = CylinderFunction::indicator(2, {0, 1});
  std::vector<mpq_class> ct, bt;
  for (long v : pn) ct.push_back(q(v, 4));
  for (std::size_t i = 0; i < 4; ++i) bt.push_back(b[i]);
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(shift_correlation(c, b, n), oracle::correlation(ct, 3, bt, 2, 2, n)) << n;
    EXPECT_EQ(shift_correlation_adjoint(c, b, n), oracle::correlation(ct, 3, bt, 2, 2, n)) << n;
  }
}

TEST(ShiftCorrelation, KnownValues) {
  const auto m = mirror_observables();
  EXPECT_EQ(shift_correlation(m[0], m[0], 0), q(1, 4));
  EXPECT_EQ(shift_correlation(m[0], m[0], 1), 0);
  EXPECT_EQ(shift_correlation(m[1], m[1], 1), q(1, 16));
  EXPECT_EQ(shift_correlation(m[1], m[1], 2), 0);
}

TEST(ShiftConditional, NormIdentityExample) {
  const CylinderFunction b = CylinderFunction::indicator(2, {0, 0}).shifted(q(-1, 4));
  EXPECT_EQ(l2_norm_sq(shift_conditional(b, 1)), q(1, 16));
  EXPECT_EQ(l2_norm_sq(shift_conditional(b, 1)), l2_norm_sq(shift_transfer(b)));
  EXPECT_TRUE(shift_conditional(b, 2).is_zero());
}

TEST(ShiftLdt, MatchesBinomialOracle) {
  const CylinderFunction ind = CylinderFunction::indicator(2, {0});
  EXPECT_EQ(shift_ldt_exact(ind, 1, q(3, 5)), 0);
  EXPECT_EQ(shift_ldt_exact(ind, 4, q(1, 4)), q(1, 8));
  for (int n : {5, 12, 33, 64}) {
    EXPECT_EQ(shift_ldt_exact(ind, n, q(1, 4)), oracle::binomial_tail(n, q(1, 4))) << n;
  }
}

TEST(ShiftLdt, DeepObservablesEnumerateOrRefuse) {
  const CylinderFunction b = CylinderFunction::indicator(2, {0, 0});
  // S_2 / 2 - 1/4 over words x1 x2 x3 takes the values -1/4, 1/4 and 3/4 (word 000).
  EXPECT_EQ(shift_ldt_exact(b, 2, q(1, 2)), q(1, 8));
  EXPECT_EQ(shift_ldt_exact(b, 2, q(1, 5)), 1);
  try {
    shift_ldt_exact(b, 40, q(1, 5));
    FAIL() << "expected DepthUnsupported";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DepthUnsupported);
  }
}

TEST(Bennett, SmallGridProvesOrIsTight) {
  const std::vector<Rational> nus{q(1, 3), q(1, 2)};
  const std::vector<Rational> lambdas{0, q(1, 2), 2};
  const BennettReport r = bennett_check(1, nus, lambdas, 8);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.violated, 0);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.extremal_centered);
    EXPECT_NE(c.extremal, Verdict::violated) << c.nu << " " << c.lambda;
    EXPECT_NE(c.worst, Verdict::violated) << c.nu << " " << c.lambda;
    if (c.lambda == 0) EXPECT_TRUE(c.lambda_zero_exact);
  }
}

TEST(FiberSets, HoldForSeveralAlphabets) {
  for (int d : {2, 3, 4}) EXPECT_TRUE(fiber_set_check(d).ok) << d;
}

TEST(BoundedJacobian, KappaIsTheDegree) {
  const AbstractSystemReport r = bounded_jacobian_check(2, 3);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.kappa, 2);
  EXPECT_TRUE(r.kappa_tight);
  EXPECT_TRUE(r.delta_ok);
}

TEST(ExpSeries, ConstantFamilyIsTight) {
  const std::vector<std::vector<Rational>> E(4, std::vector<Rational>(kExpSeriesCells, Rational(3)));
  const ExpSeriesReport r = exp_series_check(3, q(1, 2), E);
  EXPECT_TRUE(r.ok);
  EXPECT_NE(r.final, Verdict::violated);
}

TEST(ExpSeries, HypothesisViolationIsReported) {
  std::vector<std::vector<Rational>> E(3, std::vector<Rational>(kExpSeriesCells, Rational(1)));
  E[1].assign(kExpSeriesCells, Rational(5));
  const ExpSeriesReport r = exp_series_check(3, q(1, 2), E);
  EXPECT_EQ(r.hypothesis, Verdict::violated);
  EXPECT_FALSE(r.ok);
}

TEST(ShiftMartingale, ExactOnMirrors) {
  for (const auto& c : mirror_observables()) {
    const ShiftDecomposition d = shift_martingale(c);
    EXPECT_TRUE(d.lambda_zero);
    EXPECT_TRUE(d.orthogonal);
    EXPECT_TRUE(d.reconstructs);
    EXPECT_TRUE(shift_transfer(d.psi_prime).is_zero());
  }
}

TEST(GordinTerms, VanishBeyondTheDepth) {
  const auto m = mirror_observables();
  const auto terms = gordin_terms(m[1]);
  ASSERT_GE(terms.size(), 3u);
  EXPECT_EQ(terms[0], q(3, 16));
  EXPECT_EQ(terms[1], q(1, 16));
  EXPECT_EQ(terms[2], 0);
}

TEST(ShiftSystem, PreimagesMapForward) {
  const ShiftSystem sys(3);
  std::vector<ShiftSystem::Point> pre;
  const ShiftSystem::Point x = 5 + 3 * 7;
  sys.preimages(x, pre);
  ASSERT_EQ(pre.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(sys.forward(pre[a]), x);
    EXPECT_EQ(pre[a] % 3, a);
  }
}

TEST(ShiftObservable, AgreesWithTheTable) {
  const CylinderFunction c = table(2, 3, {3, -1, 0, 2, -2, 1, 1, -4}, 4);
  const ShiftObservable o(c);
  for (std::uint64_t w = 0; w < 8; ++w) {
    // packed word: x1 is the least significant digit
    const std::vector<int> word{static_cast<int>(w & 1), static_cast<int>((w >> 1) & 1),
                                static_cast<int>((w >> 2) & 1)};
    EXPECT_DOUBLE_EQ(o(w), c.value(word).get_d());
  }
  EXPECT_DOUBLE_EQ(*o.mean_hint(), 0.0);
}

TEST(OracleSuite, DefaultRunPasses) {
  const OracleSuiteReport r = run_oracle_suite();
  EXPECT_TRUE(r.ok);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  EXPECT_GT(r.ldt_h, 0.0);
}

TEST(LdtFit, SingleRateBoundsTheBinomialTails) {
  const BinomialEnvelope env = binomial_ldt_envelope();
  EXPECT_TRUE(env.all_under);
  double h = 1e300;
  for (std::size_t i = 0; i < env.n.size(); ++i) {
    const double n = env.n[i];
    const double t = oracle::binomial_tail(env.n[i], q(1, 4)).get_d();
    h = std::min(h, -std::log(t) * std::log(n) * std::log(n) / n);
  }
  EXPECT_NEAR(env.h, h, 1e-12);
}
