#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "landau/philox.hpp"

using namespace landau;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswerZero) {
  const auto w = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(w[0], 0x6627e8d5u);
  EXPECT_EQ(w[1], 0xe169c58du);
  EXPECT_EQ(w[2], 0xbc57ac4cu);
  EXPECT_EQ(w[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto w = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(w[0], 0x408f276du);
  EXPECT_EQ(w[1], 0x41c83b0eu);
  EXPECT_EQ(w[2], 0xa20bc7c6u);
  EXPECT_EQ(w[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto w = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(w[0], 0xd16cfe09u);
  EXPECT_EQ(w[1], 0x94fdccebu);
  EXPECT_EQ(w[2], 0x5001e420u);
  EXPECT_EQ(w[3], 0x24126ea1u);
}

TEST(PairNormals, DeterministicAndKeyed) {
  const NoiseKey k{42, 7, 3, 9};
  EXPECT_EQ(pair_normals(k), pair_normals(k));
  EXPECT_NE(pair_normals(k), pair_normals({42, 8, 3, 9}));
  EXPECT_NE(pair_normals(k), pair_normals({42, 7, 3, 10}));
  EXPECT_NE(pair_normals(k), pair_normals({43, 7, 3, 9}));
  EXPECT_NE(pair_normals(k), pair_normals({42, 7, 9, 3}));
  // Steps differing only above bit 32 still differ.
  EXPECT_NE(pair_normals({1, 5, 0, 1}), pair_normals({1, 5 + (1ull << 32), 0, 1}));
}

TEST(PairNormals, StandardMoments) {
  const int n = 60000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const auto g = pair_normals({5, static_cast<std::uint64_t>(i), 1, 2});
    for (double x : g) {
      s1 += x;
      s2 += x * x;
      s4 += x * x * x * x;
    }
  }
  const double m = 3.0 * n;
  EXPECT_NEAR(s1 / m, 0.0, 5.0 / std::sqrt(m));
  EXPECT_NEAR(s2 / m, 1.0, 5.0 * std::sqrt(2.0 / m));
  EXPECT_NEAR(s4 / m, 3.0, 5.0 * std::sqrt(96.0 / m));
}

TEST(CounterStream, UniformRangeAndReproducible) {
  CounterStream a(9, 4);
  CounterStream b(9, 4);
  CounterStream c(9, 5);
  double sum = 0;
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    EXPECT_EQ(u, b.uniform());
    differs = differs || u != c.uniform();
    sum += u;
  }
  EXPECT_TRUE(differs);
  EXPECT_NEAR(sum / 10000, 0.5, 5 * std::sqrt(1.0 / 12 / 10000));
}

TEST(CounterStream, NormalMoments) {
  CounterStream r(1, 0);
  const int n = 100000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}
