#include <gtest/gtest.h>

#include <set>

#include "sqlcorpus/rng.hpp"

using namespace sqlcorpus;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DeriveSeedSeparatesIndicesAndAttempts) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    for (std::uint64_t a = 0; a < 3; ++a) seen.insert(derive_seed(7, i, a));
  }
  EXPECT_EQ(seen.size(), 3000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, IndexStaysInRange) {
  Rng r(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.index(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, UniformIntInclusive) {
  Rng r(3);
  int lo = 100, hi = -100;
  for (int i = 0; i < 10000; ++i) {
    const int x = r.uniform_int(2, 12);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_EQ(lo, 2);
  EXPECT_EQ(hi, 12);
}

TEST(Rng, Uniform01HalfOpen) {
  Rng r(9);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, SampleIsDistinct) {
  Rng r(5);
  for (int t = 0; t < 200; ++t) {
    const auto s = r.sample(12, 5);
    ASSERT_EQ(s.size(), 5u);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 5u);
    for (auto x : s) EXPECT_LT(x, 12u);
  }
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(11);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  auto w = v;
  r.shuffle(w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}
