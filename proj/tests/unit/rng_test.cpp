#include <gtest/gtest.h>

#include <set>

#include "greenlab/parallel.hpp"
#include "greenlab/rng.hpp"
#include "oracles.hpp"

using namespace greenlab;

TEST(Philox, MatchesReferenceVectors) {
  for (const auto& kat : oracle::kPhiloxKats) {
    const auto out = Philox4x32::generate({kat.ctr[0], kat.ctr[1], kat.ctr[2], kat.ctr[3]},
                                          {kat.key[0], kat.key[1]});
    for (int i = 0; i < 4; ++i) EXPECT_EQ(out[i], kat.out[i]) << "word " << i;
  }
}

TEST(Stream, IsAPureFunctionOfItsIdentity) {
  Stream a(7, Purpose::orbits, 3), b(7, Purpose::orbits, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Stream, DifferentIdentitiesDiffer) {
  std::set<std::uint64_t> firsts;
  firsts.insert(Stream(7, Purpose::orbits, 3).next_u64());
  firsts.insert(Stream(7, Purpose::orbits, 4).next_u64());
  firsts.insert(Stream(7, Purpose::sampler, 3).next_u64());
  firsts.insert(Stream(8, Purpose::orbits, 3).next_u64());
  EXPECT_EQ(firsts.size(), 4u);
}

TEST(Stream, UniformAndBelowStayInRange) {
  Stream s(1, Purpose::synthetic, 0);
  int counts[3] = {0, 0, 0};
  double sum = 0.0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    const int k = s.below(3);
    ASSERT_GE(k, 0);
    ASSERT_LT(k, 3);
    ++counts[k];
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  for (int c : counts) EXPECT_NEAR(c, n / 3.0, 5.0 * std::sqrt(n * 2.0 / 9.0));
}

TEST(ParallelFor, VisitsEveryIndexOnceForAnyWorkerCount) {
  for (int w : {1, 2, 3, 8}) {
    set_workers(w);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) ASSERT_EQ(h, 1);
  }
  set_workers(1);
}

TEST(ParallelFor, RethrowsTheLowestFailingIndex) {
  set_workers(4);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 90 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "30");
  }
  set_workers(1);
}
