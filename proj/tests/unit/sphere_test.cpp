#include <gtest/gtest.h>

#include <cmath>

#include "greenlab/sphere.hpp"

using namespace greenlab;

TEST(SpherePoint, CanonicalChartDependsOnModulus) {
  EXPECT_EQ(SpherePoint::from_z({1.5, 0.0}).chart(), Chart::z);
  EXPECT_EQ(SpherePoint::from_z({3.0, 0.0}).chart(), Chart::w);
  EXPECT_TRUE(SpherePoint::infinity().is_infinity());
  const SpherePoint p = SpherePoint::from_z({3.0, 4.0});
  EXPECT_NEAR(std::abs(p.z() - Complex(3.0, 4.0)), 0.0, 1e-14);
}

TEST(SpherePoint, HomogeneousConstructionHandlesInfinity) {
  EXPECT_TRUE(SpherePoint::from_homogeneous({1.0, 0.0}, {0.0, 0.0}).is_infinity());
  const SpherePoint p = SpherePoint::from_homogeneous({1e300, 0.0}, {1e-300, 0.0});
  EXPECT_EQ(p.chart(), Chart::w);
  EXPECT_LT(std::abs(p.coord()), 1e-300);
  const SpherePoint q = SpherePoint::from_homogeneous({2.0, 2.0}, {4.0, 0.0});
  EXPECT_NEAR(std::abs(q.z() - Complex(0.5, 0.5)), 0.0, 1e-15);
}

TEST(Chordal, KnownDistances) {
  const SpherePoint zero = SpherePoint::from_z({0.0, 0.0});
  const SpherePoint one = SpherePoint::from_z({1.0, 0.0});
  const SpherePoint inf = SpherePoint::infinity();
  EXPECT_NEAR(chordal(zero, inf), 1.0, 1e-15);
  EXPECT_NEAR(chordal(zero, one), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(chordal(one, inf), 1.0 / std::sqrt(2.0), 1e-15);
  // |a - b| / sqrt((1+|a|^2)(1+|b|^2))
  const Complex a(0.3, -1.2), b(-2.5, 0.7);
  const double expected = std::abs(a - b) / std::sqrt((1 + std::norm(a)) * (1 + std::norm(b)));
  EXPECT_NEAR(chordal(SpherePoint::from_z(a), SpherePoint::from_z(b)), expected, 1e-15);
}

TEST(Chordal, SymmetricAndChartIndependent) {
  const SpherePoint p = SpherePoint::from_z({5.0, -1.0});
  const SpherePoint q = SpherePoint::from_z({0.2, 0.1});
  EXPECT_DOUBLE_EQ(chordal(p, q), chordal(q, p));
  EXPECT_NEAR(chordal(p.as_chart(Chart::z), q), chordal(p, q), 1e-15);
  EXPECT_NEAR(chordal(q.as_chart(Chart::w), p), chordal(p, q), 1e-15);
  EXPECT_EQ(chordal(p, p), 0.0);
}

TEST(Chordal, ReciprocalIsAnIsometryOnTheUnitCircle) {
  // z -> 1/z preserves chordal distances.
  const Complex a(0.6, 0.3), b(-1.7, 2.2);
  const double d1 = chordal(SpherePoint::from_z(a), SpherePoint::from_z(b));
  const double d2 = chordal(SpherePoint::from_z(1.0 / a), SpherePoint::from_z(1.0 / b));
  EXPECT_NEAR(d1, d2, 1e-15);
}
