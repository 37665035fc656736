#include <gtest/gtest.h>

#include <cmath>

#include "greenlab/error.hpp"
#include "greenlab/io.hpp"
#include "greenlab/lab.hpp"
#include "greenlab/parallel.hpp"
#include "oracles.hpp"

using namespace greenlab;

namespace {

RationalMap z2() { return make_rational_map({0.0, 0.0, 1.0}, {1.0}); }

Observable re_pow(int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k + 1), 0.0);
  c.back() = 1.0;
  return Observable::trig_poly(c);
}

const EmpiricalMeasure& cloud() {
  static const EmpiricalMeasure mu = sample_equilibrium(z2(), 8000, 50, 21);
  return mu;
}

OrbitParams orbits(int n) {
  OrbitParams o;
  o.n_orbits = n;
  o.seed = 4;
  return o;
}

}  // namespace

TEST(Birkhoff, ForwardSumOnAFixedPoint) {
  const SpherePoint one = SpherePoint::from_z({1.0, 0.0});
  EXPECT_DOUBLE_EQ(birkhoff_sum(z2(), re_pow(1), one, 10), 10.0);
  EXPECT_DOUBLE_EQ(birkhoff_sum(z2(), re_pow(1), one, 0), 0.0);
}

TEST(Correlations, FourierOracleForReZ) {
  CorrelationParams p;
  p.n_max = 4;
  p.orbits = orbits(8000);
  const CorrelationReport r = correlation_series(z2(), cloud(), re_pow(1), re_pow(1), p);
  ASSERT_EQ(r.corr.size(), 5u);
  EXPECT_LE(std::abs(r.corr[0] - 0.5), 4.0 * r.corr_stderr[0]);
  for (std::size_t n = 1; n < r.corr.size(); ++n) {
    EXPECT_LE(std::abs(r.corr[n]), 3.0 * r.corr_stderr[n]) << n;
    EXPECT_LE(std::abs(r.forward[n]), 4.0 * r.forward_stderr[n]) << n;
    EXPECT_TRUE(r.agree[n]);
  }
  EXPECT_FALSE(r.claim);
  EXPECT_TRUE(r.rate_ok);
}

TEST(Correlations, ConventionPutsTheTransferOnPhi) {
  CorrelationParams p;
  p.n_max = 3;
  p.orbits = orbits(8000);
  // <Re z^2 (Re z o f)> = <cos 2t cos 2t> = 1/2; the other order gives 0.
  const CorrelationReport a = correlation_series(z2(), cloud(), re_pow(2), re_pow(1), p);
  const CorrelationReport b = correlation_series(z2(), cloud(), re_pow(1), re_pow(2), p);
  EXPECT_LE(std::abs(a.corr[1] - 0.5), 4.0 * a.corr_stderr[1]);
  EXPECT_LE(std::abs(b.corr[1]), 4.0 * b.corr_stderr[1]);
  EXPECT_LE(std::abs(a.forward[1] - 0.5), 4.0 * a.forward_stderr[1]);
}

TEST(Correlations, MonteCarloLevelsBeyondTheBudget) {
  CorrelationParams p;
  p.n_max = 3;
  p.orbits = orbits(4000);
  p.budget.exact_depth_max = 1;
  const CorrelationReport r = correlation_series(z2(), cloud(), re_pow(2), re_pow(1), p);
  EXPECT_EQ(r.method[1], "adjoint");
  EXPECT_EQ(r.method[2], "forward");
  EXPECT_TRUE(std::isnan(r.adjoint[2]));
}

TEST(Variance, ReZPlusReZSquared) {
  VarianceParams p;
  p.n_max = 6;
  p.birkhoff_grid = {8, 16};
  p.orbits = orbits(8000);
  const VarianceReport r = variance_sigma2(z2(), cloud(), linear_combination({{1.0, re_pow(1)}, {1.0, re_pow(2)}}), p);
  EXPECT_LE(std::abs(r.sigma2 - 2.0), 4.0 * r.sigma2_stderr);
  EXPECT_LE(std::abs(r.gamma - 1.0), 4.0 * r.gamma_stderr);
  ASSERT_EQ(r.birkhoff_check.size(), 2u);
  for (const auto& b : r.birkhoff_check) EXPECT_TRUE(b.ok) << b.n;
}

TEST(Clt, CoboundaryIsDetected) {
  const Observable cob = linear_combination({{1.0, re_pow(1)}, {-1.0, re_pow(2)}});
  try {
    clt_test(z2(), cloud(), cob, 64, 100, 1);
    FAIL() << "expected CoboundaryDetected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoboundaryDetected);
  }
}

TEST(Clt, GaussianForReZ) {
  const CltReport r = clt_test(z2(), cloud(), re_pow(1), 128, 4000, 3);
  EXPECT_LT(r.ks, 0.04);
  EXPECT_NEAR(r.sigma, std::sqrt(0.5), 0.03);
  EXPECT_EQ(r.quantiles.size(), 7u);
}

TEST(Ldt, ControlTailIsExactlyZero) {
  LdtParams p;
  p.epsilon = 0.2;
  p.n_grid = {4, 16};
  p.orbits = orbits(4000);
  const LdtReport r = ldt_tail(z2(), cloud(), re_pow(1), p);
  EXPECT_TRUE(r.control_ok);
  for (double t : r.control_tail) EXPECT_EQ(t, 0.0);
  EXPECT_TRUE(r.h_fitted);
  EXPECT_GT(r.tail[0], r.tail[1]);
  for (bool ok : r.envelope_ok) EXPECT_TRUE(ok);
}

TEST(Ldt, RejectsUnboundedObservables) {
  EXPECT_THROW(ldt_tail(z2(), cloud(), Observable::log_singular(1.0, SpherePoint{}), {}), Error);
}

TEST(HigherOrder, MatchesCosineProductOracle) {
  for (auto [n1, n2] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{1, 3}}) {
    const HigherOrderReport r =
        higher_order_correlation(z2(), cloud(), re_pow(1), re_pow(1), re_pow(1), n1, n2, orbits(8000));
    const double exact = oracle::cosine_product_mean({1, 1L << n1, 1L << n2});
    EXPECT_LE(std::abs(r.value - exact), 4.0 * r.std_err + 1e-12) << n1 << "," << n2;
  }
}

TEST(Determinism, ReportsIgnoreTheWorkerCount) {
  CorrelationParams p;
  p.n_max = 3;
  p.orbits = orbits(3000);
  set_workers(1);
  const json a = correlation_series(z2(), cloud(), re_pow(2), re_pow(1), p);
  set_workers(4);
  const json b = correlation_series(z2(), cloud(), re_pow(2), re_pow(1), p);
  set_workers(1);
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(ObservableMean, UsesTheSmoothedCloudWithoutAHint) {
  const Observable h = Observable::custom(ObservableClass::holder, [](const SpherePoint& p) {
    return std::pow(p.z().real(), 2);
  });
  const Estimate m = observable_mean(z2(), cloud(), h, 6);
  EXPECT_LE(std::abs(m.value - 0.5), 4.0 * m.std_err + 1e-9);
}
