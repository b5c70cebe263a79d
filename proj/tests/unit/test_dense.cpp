#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "streamelas/dense.hpp"
#include "streamelas/synthetic.hpp"

using namespace streamelas;

namespace {

DisparitySet full(int range) {
  DisparitySet s;
  s.insert_all(range);
  return s;
}

// Unrestricted winner-take-all written out per pixel.
DisparityMap wta_oracle(const GrayImage& l, const GrayImage& r, int window, int range) {
  const int rad = window / 2;
  DisparityMap out(l.width(), l.height(), kInvalidDisparity);
  for (int v = rad; v < l.height() - rad; ++v) {
    for (int u = rad; u < l.width() - rad; ++u) {
      int best = -1, best_cost = 1 << 30;
      for (int d = 0; d < range && u - d >= rad; ++d) {
        const int c = oracle::hamming(oracle::census(l, window, u, v), oracle::census(r, window, u - d, v));
        if (c < best_cost) {
          best_cost = c;
          best = d;
        }
      }
      if (best >= 0) out.at(u, v) = static_cast<std::uint16_t>(best);
    }
  }
  return out;
}

}  // namespace

TEST(DenseMatch, FullRangeOnShiftedTexture) {
  const auto scene = synthetic::constant_shift(120, 60, 7, 55);
  const auto l = census::census_transform(scene.pair.left, {5});
  const auto r = census::census_transform(scene.pair.right, {5});
  const auto map = dense::dense_match(l, r, [](int, int) { return full(32); }, {5, 32, 0, false});
  int good = 0, total = 0;
  for (int v = 2; v < 58; ++v) {
    for (int u = 7 + 2; u < 118; ++u) {
      ++total;
      good += map.at(u, v) == 7;
    }
  }
  EXPECT_GE(good, 0.95 * total);
}

TEST(DenseMatch, SingleCandidateEverywhere) {
  const auto scene = synthetic::constant_shift(60, 30, 7, 56);
  const auto l = census::census_transform(scene.pair.left, {3});
  const auto r = census::census_transform(scene.pair.right, {3});
  DisparitySet only7;
  only7.insert(7);
  const auto map = dense::dense_match(l, r, [&](int, int) { return only7; }, {3, 32, 0, false});
  for (int v = 0; v < 30; ++v) {
    for (int u = 0; u < 60; ++u) {
      const bool feasible = l.valid(u, v) && u - 7 >= 1;
      EXPECT_EQ(map.at(u, v), feasible ? 7 : kInvalidDisparity) << u << "," << v;
    }
  }
}

TEST(DenseMatch, FullRangeEqualsUnrestrictedOracle) {
  for (std::uint64_t seed : {1u, 2u}) {
    const GrayImage l = synthetic::random_texture(40, 20, seed);
    const GrayImage r = synthetic::random_texture(40, 20, seed + 7);
    for (int w : {3, 5, 7}) {
      const auto map = dense::dense_match(census::census_transform(l, {w}), census::census_transform(r, {w}),
                                          [](int, int) { return full(16); }, {w, 16, 0, false});
      EXPECT_EQ(map, wta_oracle(l, r, w, 16)) << w;
    }
  }
}

TEST(DenseMatch, SupersetContainingWinnerKeepsWinner) {
  const GrayImage l = synthetic::random_texture(64, 24, 3);
  const GrayImage r = synthetic::random_texture(64, 24, 4);
  const auto lf = census::census_transform(l, {5});
  const auto rf = census::census_transform(r, {5});
  const auto wta = dense::dense_match(lf, rf, [](int, int) { return full(24); }, {5, 24, 0, false});
  std::mt19937 rng(1);
  Plane<DisparitySet> subset(64, 24);
  for (int v = 0; v < 24; ++v) {
    for (int u = 0; u < 64; ++u) {
      DisparitySet s;
      if (wta.at(u, v) != kInvalidDisparity) s.insert(wta.at(u, v));
      for (int k = 0; k < 4; ++k) s.insert(static_cast<int>(rng() % 24));
      subset.at(u, v) = s;
    }
  }
  const auto restricted =
      dense::dense_match(lf, rf, [&](int u, int v) { return subset.at(u, v); }, {5, 24, 0, false});
  for (int v = 0; v < 24; ++v) {
    for (int u = 0; u < 64; ++u) {
      if (wta.at(u, v) != kInvalidDisparity) EXPECT_EQ(restricted.at(u, v), wta.at(u, v));
    }
  }
}

TEST(DenseMatch, OutputInRangeOrInvalid) {
  const GrayImage l = synthetic::random_texture(50, 20, 8);
  const GrayImage r = synthetic::random_texture(50, 20, 9);
  std::mt19937 rng(2);
  const auto map = dense::dense_match(
      census::census_transform(l, {7}), census::census_transform(r, {7}),
      [&](int, int) {
        DisparitySet s;
        for (int k = 0; k < 3; ++k) s.insert(static_cast<int>(rng() % 20));
        return s;
      },
      {7, 20, 0, false});
  for (auto d : map.pixels()) EXPECT_TRUE(d == kInvalidDisparity || d < 20);
}

TEST(DenseMatch, LeftRightCheckInvalidatesMismatches) {
  const auto scene = synthetic::constant_shift(80, 30, 5, 10);
  const auto l = census::census_transform(scene.pair.left, {5});
  const auto r = census::census_transform(scene.pair.right, {5});
  const auto plain = dense::dense_match(l, r, [](int, int) { return full(16); }, {5, 16, 0, false});
  const auto checked = dense::dense_match(l, r, [](int, int) { return full(16); }, {5, 16, 0, true});
  int dropped = 0;
  for (int v = 0; v < 30; ++v) {
    for (int u = 0; u < 80; ++u) {
      if (checked.at(u, v) != kInvalidDisparity) EXPECT_EQ(checked.at(u, v), plain.at(u, v));
      dropped += checked.at(u, v) == kInvalidDisparity && plain.at(u, v) != kInvalidDisparity;
    }
  }
  // The occluded strip u < 7 has no true match and is mostly rejected.
  EXPECT_GT(dropped, 0);
}

TEST(Median, ConstantMapUnchanged) {
  const DisparityMap m(20, 10, std::uint16_t{9});
  EXPECT_EQ(dense::median_filter(m, 2), m);
}

TEST(Median, SpikeRemoved) {
  DisparityMap m(9, 9, std::uint16_t{10});
  m.at(4, 4) = 50;
  EXPECT_EQ(dense::median_filter(m, 1).at(4, 4), 10);
}

TEST(Median, MatchesSortOracleWithInvalids) {
  std::mt19937 rng(7);
  for (int r : {1, 2, 3}) {
    DisparityMap m(33, 21);
    for (auto& d : m.pixels()) d = (rng() % 4 == 0) ? kInvalidDisparity : static_cast<std::uint16_t>(rng() % 40);
    EXPECT_EQ(dense::median_filter(m, r), oracle::median(m, r));
  }
}

TEST(DenseConfig, Validation) {
  EXPECT_THROW((dense::DenseConfig{9, 64, 0, false}.validate()), Error);
  EXPECT_THROW((dense::DenseConfig{5, 1, 0, false}.validate()), Error);
  EXPECT_THROW((dense::DenseConfig{5, 64, -1, false}.validate()), Error);
  EXPECT_NO_THROW((dense::DenseConfig{7, 256, 2, true}.validate()));
}
