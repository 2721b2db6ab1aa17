#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "dpplimits/parallel.hpp"
#include "dpplimits/rng.hpp"

namespace dpplimits {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Published Random123 known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(detail::philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const std::uint32_t f = 0xffffffffu;
  EXPECT_EQ(detail::philox4x32_10({f, f, f, f}, {f, f}),
            (Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(detail::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u}),
            (Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(SeededRng, FirstOutputIsBlockZero) {
  SeededRng rng(0, 0);
  EXPECT_EQ(rng(), (std::uint64_t{0xe169c58du} << 32) | 0x6627e8d5u);
  EXPECT_EQ(rng(), (std::uint64_t{0x9b00dbd8u} << 32) | 0xbc57ac4cu);
}

TEST(SeededRng, DeterministicPerSeedAndStream) {
  SeededRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> xa, xb, xc, xd;
  for (int i = 0; i < 64; ++i) {
    xa.push_back(a());
    xb.push_back(b());
    xc.push_back(c());
    xd.push_back(d());
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
  EXPECT_NE(xa, xd);
}

TEST(SeededRng, UniformMomentsAndRange) {
  SeededRng rng(1, 2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(SeededRng, NormalMoments) {
  SeededRng rng(3, 4);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(SeededRng, BelowCoversRangeUniformly) {
  SeededRng rng(5, 6);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (const int c : counts) EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
}

TEST(DeriveStream, DistinctForDistinctTagLists) {
  std::set<std::uint64_t> ids;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) ids.insert(derive_stream({a, b}));
  EXPECT_EQ(ids.size(), 400u);
  EXPECT_NE(derive_stream({1, 2}), derive_stream({2, 1}));
  EXPECT_NE(derive_stream({1}), derive_stream({1, 0}));
  EXPECT_EQ(derive_stream({9, 9, 9}), derive_stream({9, 9, 9}));
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  auto run = [](unsigned threads) {
    std::vector<double> out(100);
    parallel_for(out.size(), threads, [&](std::size_t i) {
      SeededRng rng(11, derive_stream({i}));
      out[i] = rng.uniform();
    });
    return pairwise_sum(out);
  };
  EXPECT_EQ(run(1), run(4));
}

TEST(Parallel, RethrowsLowestIndexFirst) {
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 3 || i == 7) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

TEST(Parallel, PairwiseSumExactOnIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 499500.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

}  // namespace
}  // namespace dpplimits
