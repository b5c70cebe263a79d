#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "../oracles.hpp"
#include "streamelas/census.hpp"
#include "streamelas/synthetic.hpp"

using namespace streamelas;

namespace {

GrayImage from_rows(int w, int h, std::initializer_list<int> values) {
  std::vector<std::uint8_t> px(values.begin(), values.end());
  return GrayImage(w, h, std::move(px));
}

std::uint64_t low_bits(const Descriptor& d) { return d.words[0]; }

}  // namespace

TEST(Census, FlatWindowGivesZeroDescriptor) {
  const GrayImage img(3, 3, std::uint8_t{7});
  const auto field = census::census_transform(img, {3});
  EXPECT_EQ(low_bits(field.at(1, 1)), 0u);
}

TEST(Census, FirstNeighbourIsMostSignificant) {
  const GrayImage img = from_rows(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto field = census::census_transform(img, {3});
  EXPECT_EQ(low_bits(field.at(1, 1)), 0b11110000u);
}

TEST(Census, BorderPixelsAreZeroAndInvalid) {
  const GrayImage img = synthetic::random_texture(20, 15, 3);
  const auto field = census::census_transform(img, {5});
  for (int v = 0; v < 15; ++v) {
    for (int u = 0; u < 20; ++u) {
      const bool inside = u >= 2 && v >= 2 && u < 18 && v < 13;
      EXPECT_EQ(field.valid(u, v), inside);
      if (!inside) EXPECT_EQ(field.at(u, v), Descriptor{});
    }
  }
}

TEST(Census, ImageSmallerThanWindowIsRejected) {
  const GrayImage img(8, 20);
  try {
    census::census_transform(img, {9});
    FAIL() << "expected InputTooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InputTooSmall);
  }
}

TEST(Census, EvenOrOversizedWindowIsInvalidConfig) {
  const GrayImage img(40, 40);
  for (int w : {1, 2, 4, 15}) {
    EXPECT_THROW(census::census_transform(img, {w}), Error) << w;
  }
}

class CensusNaive : public ::testing::TestWithParam<int> {};

TEST_P(CensusNaive, MatchesPerPixelRecomputation) {
  const int window = GetParam();
  const GrayImage img = synthetic::random_texture(64, 64, 100 + window);
  const auto field = census::census_transform(img, {window});
  for (int v = 0; v < 64; ++v) {
    for (int u = 0; u < 64; ++u) {
      ASSERT_EQ(field.at(u, v), oracle::census(img, window, u, v)) << u << "," << v;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllWindows, CensusNaive, ::testing::Values(3, 5, 7, 9, 11, 13));

TEST(Census, DescriptorUsesExactlyWindowSquaredMinusOneBits) {
  // A centre darker than every neighbour except none: all neighbours brighter gives 0,
  // a centre brighter than all neighbours sets every used bit.
  for (int w : {3, 5, 7, 9, 11, 13}) {
    GrayImage img(w, w, std::uint8_t{0});
    img.at(w / 2, w / 2) = 255;
    const Descriptor d = census::census_transform(img, {w}).at(w / 2, w / 2);
    int set = 0;
    for (int i = 0; i < 256; ++i) set += d.bit(i);
    EXPECT_EQ(set, w * w - 1);
    EXPECT_FALSE(d.bit(w * w - 1));
  }
}

TEST(Census, ShiftCovariance) {
  const GrayImage base = synthetic::random_texture(80, 60, 9);
  const int du = 5, dv = 3;
  GrayImage moved(80, 60);
  for (int v = 0; v < 60; ++v) {
    for (int u = 0; u < 80; ++u) {
      moved.at(u, v) = base.at(std::max(0, u - du), std::max(0, v - dv));
    }
  }
  const auto a = census::census_transform(base, {7});
  const auto b = census::census_transform(moved, {7});
  for (int v = 3 + dv + 3; v < 57; ++v) {
    for (int u = 3 + du + 3; u < 77; ++u) {
      ASSERT_EQ(b.at(u, v), a.at(u - du, v - dv));
    }
  }
}

TEST(Census, MonotoneIntensityMappingLeavesDescriptorsUnchanged) {
  GrayImage img = synthetic::random_texture(48, 40, 21);
  for (auto& px : img.pixels()) px >>= 1;  // 0..127 leaves room for strictly increasing maps
  const auto reference = census::census_transform(img, {9});
  const std::vector<std::function<int(int)>> maps = {
      [](int x) { return 2 * x + 1; },
      [](int x) { return x + 100; },
      [](int x) { return x + x * x / 128; },
  };
  for (const auto& f : maps) {
    GrayImage mapped = img;
    for (auto& px : mapped.pixels()) px = static_cast<std::uint8_t>(f(px));
    EXPECT_EQ(census::census_transform(mapped, {9}), reference);
  }
}

TEST(Hamming, IdentityAndComplement) {
  const GrayImage img = synthetic::random_texture(16, 16, 5);
  const auto field = census::census_transform(img, {5});
  const Descriptor a = field.at(8, 8);
  EXPECT_EQ(hamming(a, a), 0);
  Descriptor inv;
  for (int i = 0; i < 24; ++i) {
    if (!a.bit(i)) inv.set_bit(i);
  }
  EXPECT_EQ(hamming(a, inv), 24);
}

TEST(Hamming, MatchesBitLoopAndIsAMetric) {
  const GrayImage img = synthetic::random_texture(64, 64, 77);
  const auto field = census::census_transform(img, {9});
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> coord(4, 59);
  for (int i = 0; i < 2000; ++i) {
    const Descriptor& a = field.at(coord(rng), coord(rng));
    const Descriptor& b = field.at(coord(rng), coord(rng));
    const Descriptor& c = field.at(coord(rng), coord(rng));
    ASSERT_EQ(hamming(a, b), oracle::hamming(a, b));
    ASSERT_EQ(hamming(a, b), hamming(b, a));
    ASSERT_EQ(hamming(a, b) == 0, a == b);
    ASSERT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
    ASSERT_LE(hamming(a, b), 80);
  }
}
