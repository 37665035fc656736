#include <gtest/gtest.h>

#include <cmath>

#include "greenlab/error.hpp"
#include "greenlab/observable.hpp"

using namespace greenlab;

TEST(Observable, TrigPolyIsRealPartOfPolynomial) {
  const Observable o = Observable::trig_poly({{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}});
  const Complex z(0.6, 0.8);
  EXPECT_NEAR(o(SpherePoint::from_z(z)), (1.0 + Complex(0.0, 2.0) * z + 3.0 * z * z).real(), 1e-14);
  EXPECT_EQ(o.cls(), ObservableClass::trig_poly);
  EXPECT_EQ(o.decay_exponent(), 1.0);
  EXPECT_TRUE(std::isinf(o(SpherePoint::infinity())));
}

TEST(Observable, HolderDecayIsHalfTheExponent) {
  const Observable o = Observable::holder_dist_pow(0.5, SpherePoint::from_z({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(o.decay_exponent(), 0.25);
  EXPECT_NEAR(o(SpherePoint::infinity()), std::pow(1.0 / std::sqrt(2.0), 0.5), 1e-15);
  EXPECT_THROW(Observable::holder_dist_pow(0.0, SpherePoint{}), Error);
  EXPECT_THROW(Observable::holder_dist_pow(2.5, SpherePoint{}), Error);
}

TEST(Observable, LogSingularClampsAtTheCutoff) {
  const SpherePoint c = SpherePoint::from_z({1.0, 0.0});
  const Observable o = Observable::log_singular(2.0, c);
  EXPECT_FALSE(o.bounded());
  EXPECT_DOUBLE_EQ(o(c), 2.0 * std::log(kSingularCutoff));
  EXPECT_TRUE(o.singular_hit(c));
  const SpherePoint minus_one = SpherePoint::from_z({-1.0, 0.0});
  EXPECT_FALSE(o.singular_hit(minus_one));
  EXPECT_NEAR(o(minus_one), 0.0, 1e-15);  // chordal(1, -1) = 1
}

TEST(Observable, LinearCombinationKeepsHintsAndSlowestDecay) {
  const Observable a = Observable::constant(2.0);
  const Observable b = Observable::holder_dist_pow(1.0, SpherePoint{});
  const Observable s = linear_combination({{3.0, a}, {1.0, a}});
  ASSERT_TRUE(s.mean_hint().has_value());
  EXPECT_DOUBLE_EQ(*s.mean_hint(), 8.0);
  const Observable t = linear_combination({{1.0, a}, {-1.0, b}});
  EXPECT_FALSE(t.mean_hint().has_value());
  EXPECT_DOUBLE_EQ(t.decay_exponent(), 0.5);
  const SpherePoint p = SpherePoint::from_z({0.3, 0.0});
  EXPECT_DOUBLE_EQ(t(p), 2.0 - chordal(p, SpherePoint{}));
}

TEST(Observable, CombinationWithSingularPartIsUnbounded) {
  const Observable l = Observable::log_singular(1.0, SpherePoint{});
  const Observable s = linear_combination({{1.0, l}, {1.0, Observable::constant(1.0)}});
  EXPECT_FALSE(s.bounded());
  EXPECT_TRUE(s.singular_hit(SpherePoint{}));
}
