#include <gtest/gtest.h>

#include <cmath>

#include "greenlab/error.hpp"
#include "greenlab/rational_map.hpp"

using namespace greenlab;

namespace {

RationalMap quadratic(Complex c) { return make_rational_map({c, 0.0, 1.0}, {1.0}); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ConfigError;
}

}  // namespace

TEST(RationalMap, RejectsLowDegreeAndCommonRoots) {
  EXPECT_EQ(code_of([] { make_rational_map({0.0, 1.0}, {1.0}); }), ErrorCode::DegreeTooLow);
  // z(z - 1) / (z - 1)
  EXPECT_EQ(code_of([] { make_rational_map({0.0, -1.0, 1.0}, {-1.0, 1.0}); }),
            ErrorCode::DegenerateMap);
  // z^2 / z^2 shares the root 0; 1 / z^2 ... (z^2 + 1)/(0 z^2) shares infinity with nothing.
  EXPECT_EQ(code_of([] { make_rational_map({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}); }),
            ErrorCode::DegenerateMap);
  EXPECT_NO_THROW(make_rational_map({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}));  // 1/z^2
}

TEST(RationalMap, AppliesAcrossCharts) {
  const RationalMap f = quadratic(-1.0);
  EXPECT_NEAR(std::abs(f.apply(SpherePoint::from_z({2.0, 0.0})).z() - Complex(3.0, 0.0)), 0.0, 1e-14);
  EXPECT_TRUE(f.apply(SpherePoint::infinity()).is_infinity());
  const SpherePoint big = SpherePoint::from_z({1e8, 0.0});
  EXPECT_NEAR(std::abs(1.0 / f.apply(big).z()), 1e-16, 1e-22);
  const RationalMap g = make_rational_map({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0});
  EXPECT_NEAR(std::abs(g.apply(SpherePoint::infinity()).z()), 0.0, 0.0);
}

TEST(Preimages, SquareRootsForZSquared) {
  const RationalMap f = quadratic(0.0);
  const Complex p(0.6, 0.8);
  const auto pre = f.preimages(SpherePoint::from_z(p));
  ASSERT_EQ(pre.size(), 2u);
  const Complex r = std::sqrt(p);
  for (const auto& q : pre) {
    EXPECT_EQ(q.multiplicity, 1);
    EXPECT_NEAR(std::min(std::abs(q.point.z() - r), std::abs(q.point.z() + r)), 0.0, 1e-14);
  }
}

TEST(Preimages, CriticalValuesClusterWithMultiplicity) {
  const RationalMap f = quadratic(0.0);
  const auto zero = f.preimages(SpherePoint::from_z({0.0, 0.0}));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].multiplicity, 2);
  const auto inf = f.preimages(SpherePoint::infinity());
  ASSERT_EQ(inf.size(), 1u);
  EXPECT_EQ(inf[0].multiplicity, 2);
  EXPECT_TRUE(inf[0].point.is_infinity());
}

TEST(Preimages, HigherDegreeRootsMapBack) {
  // (z^3 - 2z + 1) / (0.5 z^2 + 3)
  const RationalMap f = make_rational_map({1.0, -2.0, 0.0, 1.0}, {3.0, 0.0, 0.5});
  ASSERT_EQ(f.degree(), 3);
  for (const Complex target : {Complex(0.3, -0.4), Complex(5.0, 2.0), Complex(-40.0, 0.0)}) {
    std::vector<SpherePoint> roots;
    f.preimage_roots(SpherePoint::from_z(target), roots);
    ASSERT_EQ(roots.size(), 3u);
    for (const auto& y : roots) {
      EXPECT_LT(chordal(f.apply(y), SpherePoint::from_z(target)), 1e-9);
    }
  }
  std::vector<SpherePoint> at_inf;
  f.preimage_roots(SpherePoint::infinity(), at_inf);
  int infinite = 0;
  for (const auto& y : at_inf) infinite += y.is_infinity();
  EXPECT_EQ(infinite, 1);  // deg numer - deg denom = 1
}

TEST(Preimages, OrderIsDeterministic) {
  const RationalMap f = quadratic({-0.12, 0.74});
  std::vector<SpherePoint> a, b;
  f.preimage_roots(SpherePoint::from_z({0.1, 0.2}), a);
  f.preimage_roots(SpherePoint::from_z({0.1, 0.2}), b);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Poly, ResidualContractHolds) {
  const std::vector<Complex> c{1.0, 0.0, 0.0, 0.0, -3.0, 1.0};
  std::vector<SpherePoint> roots;
  poly::solve(c, roots);
  ASSERT_EQ(roots.size(), 5u);
  for (const auto& r : roots) EXPECT_LE(poly::backward_residual(c, r), kRootTolerance);
}

TEST(RationalMap, FingerprintIsStable) {
  EXPECT_EQ(quadratic(-1.0).fingerprint(), quadratic(-1.0).fingerprint());
  EXPECT_NE(quadratic(-1.0).fingerprint(), quadratic(0.0).fingerprint());
}
