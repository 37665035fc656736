#include <gtest/gtest.h>

#include <cmath>

#include "greenlab/error.hpp"
#include "greenlab/measure.hpp"
#include "greenlab/transfer.hpp"
#include "oracles.hpp"

using namespace greenlab;

namespace {

RationalMap z2() { return make_rational_map({0.0, 0.0, 1.0}, {1.0}); }
Observable re_pow(int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k + 1), 0.0);
  c.back() = 1.0;
  return Observable::trig_poly(c);
}

}  // namespace

TEST(Transfer, HalvesFrequenciesOnTheCircle) {
  const RationalMap f = z2();
  const SpherePoint p = SpherePoint::from_z(std::polar(1.0, 0.7));
  // Lambda cos(2k theta) = cos(k theta); Lambda cos(theta) = 0.
  EXPECT_NEAR(transfer(f, re_pow(2), p, 1).value, std::cos(0.7), 1e-14);
  EXPECT_NEAR(transfer(f, re_pow(4), p, 2).value, std::cos(0.7), 1e-14);
  EXPECT_NEAR(transfer(f, re_pow(1), p, 1).value, 0.0, 1e-14);
  EXPECT_NEAR(transfer(f, re_pow(6), p, 1).value, std::cos(3 * 0.7), 1e-13);
}

TEST(Transfer, PreservesConstantsAndIsPositive) {
  const RationalMap f = make_rational_map({{-0.12, 0.74}, 0.0, 1.0}, {1.0});
  const SpherePoint p = SpherePoint::from_z({0.4, -0.2});
  EXPECT_NEAR(transfer(f, Observable::constant(3.5), p, 6).value, 3.5, 1e-13);
  const Observable h = Observable::holder_dist_pow(1.0, SpherePoint{});
  EXPECT_GT(transfer(f, h, p, 4).value, 0.0);
}

TEST(Transfer, MonteCarloAgreesWithTheExactTree) {
  const RationalMap f = make_rational_map({-1.0, 0.0, 1.0}, {1.0});
  const SpherePoint p = SpherePoint::from_z({0.3, 0.9});
  const Observable h = Observable::holder_dist_pow(1.0, SpherePoint::from_z({1.0, 0.0}));
  const TransferValue exact = transfer(f, h, p, 9);
  TransferBudget mc;
  mc.exact_depth_max = 4;
  mc.mc_paths = 20000;
  mc.seed = 9;
  const TransferValue est = transfer(f, h, p, 9, mc);
  EXPECT_TRUE(exact.exact);
  EXPECT_FALSE(est.exact);
  EXPECT_GT(est.std_err, 0.0);
  EXPECT_LE(std::abs(est.value - exact.value), 4.0 * est.std_err);
}

TEST(Transfer, CountsSingularHits) {
  const RationalMap f = z2();
  const Observable l = Observable::log_singular(1.0, SpherePoint::from_z({-1.0, 0.0}));
  const TransferValue v = transfer(f, l, SpherePoint::from_z({1.0, 0.0}), 1);
  EXPECT_EQ(v.singular_hits, 1u);
}

TEST(Gordin, NormsOfTrigPolynomialsVanishAfterTheirDegree) {
  const RationalMap f = z2();
  const EmpiricalMeasure mu = sample_equilibrium(f, 4000, 50, 1);
  const GordinReport g = gordin_sequence(f, mu, re_pow(4), 4);
  ASSERT_EQ(g.norm.size(), 5u);
  // ||cos 4 theta|| = ||cos 2 theta|| = ||cos theta|| = 1/sqrt 2, then 0.
  for (int n = 0; n <= 2; ++n) EXPECT_NEAR(g.norm[static_cast<std::size_t>(n)], std::sqrt(0.5), 0.03);
  EXPECT_LT(g.norm[3], 1e-12);
  EXPECT_LT(g.norm[4], 1e-12);
}

TEST(Martingale, ReZSquaredSplitsIntoReZ) {
  const RationalMap f = z2();
  const EmpiricalMeasure mu = sample_equilibrium(f, 3000, 50, 2);
  const MartingaleDecomposition dec = martingale_decompose(f, re_pow(2), mu);
  EXPECT_EQ(dec.truncation_N, 2);
  // psi' = Re z, psi'' = -Re z on the circle.
  for (double t : {0.1, 1.3, 2.9}) {
    const SpherePoint p = SpherePoint::from_z(std::polar(1.0, t));
    EXPECT_NEAR(dec.psi_prime(p), std::cos(t), 1e-9);
    EXPECT_NEAR(dec.psi_dblprime(p), -std::cos(t), 1e-9);
  }
  MartingaleCheckParams cp;
  cp.n_orbits = 4000;
  const MartingaleCheck check = check_martingale(f, mu, dec, cp);
  EXPECT_TRUE(check.lambda_ok);
  EXPECT_TRUE(check.ok);
  const ReconstructionCheck rec = check_reconstruction(f, re_pow(2), mu, dec, 50);
  EXPECT_TRUE(rec.ok);
  EXPECT_EQ(rec.points, 50);
}

TEST(Martingale, ForcedZeroTruncationLeavesLambdaNonzero) {
  const RationalMap f = z2();
  const EmpiricalMeasure mu = sample_equilibrium(f, 3000, 50, 2);
  DecomposeParams dp;
  dp.force_N = 0;
  const MartingaleDecomposition dec = martingale_decompose(f, re_pow(2), mu, dp);
  MartingaleCheckParams cp;
  cp.n_orbits = 4000;
  const MartingaleCheck check = check_martingale(f, mu, dec, cp);
  EXPECT_FALSE(check.lambda_ok);
  EXPECT_NEAR(check.lambda_norm, std::sqrt(0.5), 0.05);
}

TEST(ExpMomentTransfer, ShrinksForSmoothObservables) {
  const RationalMap f = z2();
  const EmpiricalMeasure mu = sample_equilibrium(f, 2000, 50, 6);
  // d^n Lambda^n cos(4 theta) = 4 cos(theta) for n = 2: <exp(alpha 4|cos|)> > 1.
  const ExpMomentReport r = exp_moment_transfer(f, mu, re_pow(4), 0.1, 2);
  EXPECT_GT(r.value, 1.0);
  EXPECT_FALSE(r.flagged);
  const ExpMomentReport zero = exp_moment_transfer(f, mu, re_pow(1), 0.1, 3);
  EXPECT_NEAR(zero.value, 1.0, 1e-9);
}
