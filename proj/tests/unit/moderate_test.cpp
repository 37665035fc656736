#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "greenlab/error.hpp"
#include "greenlab/moderate.hpp"
#include "oracles.hpp"

using namespace greenlab;

namespace {

const EmpiricalMeasure& circle() {
  static const EmpiricalMeasure mu =
      sample_equilibrium(make_rational_map({0.0, 0.0, 1.0}, {1.0}), 40000, 50, 8);
  return mu;
}

}  // namespace

TEST(PshTail, MatchesTheArcOracle) {
  const SpherePoint one = SpherePoint::from_z({1.0, 0.0});
  const std::vector<double> grid{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0};
  const ModerateReport r = psh_tail_exponent(circle(), Observable::log_singular(1.0, one), grid);
  ASSERT_FALSE(r.degenerate);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // chordal distance to 1 on the circle is |z - 1| / 2.
    const double exact = oracle::arc_within(2.0 * std::exp(-grid[k]));
    EXPECT_LE(std::abs(r.tail[k] - exact), 4.0 * r.tail_stderr[k] + 1e-12) << grid[k];
  }
  EXPECT_NEAR(r.alpha_hat, 1.0, 0.1);
  EXPECT_GE(r.fit_window.first, 0);
}

TEST(PshTail, OffSupportSingularityIsDegenerate) {
  const std::vector<double> grid{1.0, 2.0, 3.0, 4.0};
  const ModerateReport r =
      psh_tail_exponent(circle(), Observable::log_singular(1.0, SpherePoint::from_z({3.0, 0.0})), grid);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.fit_window, std::make_pair(-1, -1));
}

TEST(PshTail, TooFewPointsThrows) {
  const std::vector<double> grid{1.0, 12.0, 13.0};
  try {
    psh_tail_exponent(circle(), Observable::log_singular(1.0, SpherePoint::from_z({1.0, 0.0})), grid);
    FAIL() << "expected InsufficientTailData";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientTailData);
  }
}

TEST(PshTail, RejectsBadGrids) {
  const std::vector<double> grid{2.0, 1.0};
  EXPECT_THROW(psh_tail_exponent(circle(), Observable::constant(0.0), grid), Error);
}

TEST(BallMass, AreaMeasureHasExponentTwo) {
  const EmpiricalMeasure disc = uniform_disc({0.2, 0.0}, 0.2, 200000, 1);
  std::vector<double> radii;
  for (int i = 0; i < 10; ++i) radii.push_back(0.1 * std::pow(0.1, i / 9.0));
  const BallMassReport r = ball_mass_exponent(disc, SpherePoint::from_z({0.2, 0.0}), radii);
  ASSERT_FALSE(r.degenerate);
  EXPECT_NEAR(r.alpha_hat, 2.0, 0.1);
}

TEST(BallMass, ArcMeasureHasExponentOne) {
  std::vector<double> radii;
  for (int i = 0; i < 12; ++i) radii.push_back(0.2 * std::pow(0.01, i / 11.0));
  const BallMassReport r = ball_mass_exponent(circle(), SpherePoint::from_z({1.0, 0.0}), radii);
  ASSERT_FALSE(r.degenerate);
  EXPECT_NEAR(r.alpha_hat, 1.0, 0.15);
  for (int h : r.hits) EXPECT_GE(h, 0);
}

TEST(BallMass, CenterAwayFromTheSupportIsDegenerate) {
  const std::vector<double> radii{0.1, 0.05, 0.01};
  const BallMassReport r = ball_mass_exponent(circle(), SpherePoint::from_z({0.0, 0.0}), radii);
  EXPECT_TRUE(r.degenerate);
  EXPECT_GT(r.nearest_sample, 0.1);
}
