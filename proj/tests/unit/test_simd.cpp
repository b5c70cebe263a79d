#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "streamelas/census.hpp"
#include "streamelas/simd/kernels.hpp"
#include "streamelas/synthetic.hpp"

using namespace streamelas;

TEST(Isa, ParseAndNames) {
  EXPECT_EQ(simd::parse_isa("scalar"), simd::Isa::Scalar);
  EXPECT_EQ(simd::to_string(simd::Isa::Avx2), "avx2");
  EXPECT_THROW(simd::parse_isa("neon"), Error);
  EXPECT_TRUE(simd::cpu_supports(simd::Isa::Scalar));
}

TEST(Isa, EnvironmentForcesScalar) {
  ::setenv("STREAMELAS_ISA", "scalar", 1);
  EXPECT_EQ(simd::detect_isa(), simd::Isa::Scalar);
  ::unsetenv("STREAMELAS_ISA");
}

#if STREAMELAS_HAVE_AVX2

class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!simd::cpu_supports(simd::Isa::Avx2)) GTEST_SKIP() << "CPU lacks AVX2";
  }
};

TEST_F(Avx2Equivalence, CensusRowsMatchScalarForEveryWindowAndWidth) {
  for (int window : {3, 5, 7, 9, 11, 13}) {
    for (int width : {window, window + 1, 17, 31, 32, 33, 64, 97}) {
      const int height = window + 4;
      const GrayImage img = synthetic::random_texture(width, height, 1000 + window * 131 + width);
      std::vector<Descriptor> a(width), b(width);
      for (int v = 0; v < height; ++v) {
        simd::scalar::census_row(img.data(), width, height, v, window, a.data());
        simd::avx2::census_row(img.data(), width, height, v, window, b.data());
        ASSERT_EQ(a, b) << "window " << window << " width " << width << " row " << v;
      }
    }
  }
}

TEST_F(Avx2Equivalence, CensusHandlesSaturatedIntensities) {
  // Extreme values catch signed/unsigned comparison mistakes.
  std::mt19937 rng(4);
  GrayImage img(40, 15);
  for (auto& px : img.pixels()) px = (rng() & 1) ? 255 : ((rng() & 1) ? 0 : 128);
  for (int window : {3, 9, 13}) {
    std::vector<Descriptor> a(40), b(40);
    for (int v = 0; v < 15; ++v) {
      simd::scalar::census_row(img.data(), 40, 15, v, window, a.data());
      simd::avx2::census_row(img.data(), 40, 15, v, window, b.data());
      ASSERT_EQ(a, b);
    }
  }
}

TEST_F(Avx2Equivalence, HammingCostsMatchScalarBothDirections) {
  const GrayImage img = synthetic::random_texture(300, 20, 8);
  const auto field = census::census_transform(img, {13}, simd::kernels_for(simd::Isa::Scalar));
  const Descriptor* row = field.row(10);
  std::vector<std::uint16_t> a(256), b(256);
  for (int count : {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 64, 127, 128, 129}) {
    simd::scalar::hamming_costs(row[150], row + 150, -1, count, a.data());
    simd::avx2::hamming_costs(row[150], row + 150, -1, count, b.data());
    ASSERT_TRUE(std::equal(a.begin(), a.begin() + count, b.begin())) << count;
    simd::scalar::hamming_costs(row[20], row + 20, +1, count, a.data());
    simd::avx2::hamming_costs(row[20], row + 20, +1, count, b.data());
    ASSERT_TRUE(std::equal(a.begin(), a.begin() + count, b.begin())) << count;
    for (int i = 0; i < count; ++i) ASSERT_EQ(a[i], oracle::hamming(row[20], row[20 + i]));
  }
}

TEST_F(Avx2Equivalence, FullTransformIdenticalAcrossKernels) {
  const GrayImage img = synthetic::random_texture(173, 61, 99);
  for (int window : {5, 9}) {
    EXPECT_EQ(census::census_transform(img, {window}, simd::kernels_for(simd::Isa::Scalar)),
              census::census_transform(img, {window}, simd::kernels_for(simd::Isa::Avx2)));
  }
}

#endif
