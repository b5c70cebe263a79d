#pragma once

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "streamelas/census.hpp"

namespace streamelas::sparse {

struct SupportPoint {
  int u = 0;
  int v = 0;
  int d = 0;

  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

/// Row-major (stream) order: by v, then u.
inline bool raster_less(const SupportPoint& a, const SupportPoint& b) noexcept {
  return a.v != b.v ? a.v < b.v : a.u < b.u;
}

struct SparseConfig {
  int disparity_range = 128;  ///< D; candidates are 0..D-1
  bool lr_check = false;
  int downsample = 1;  ///< keep fraction 1/downsample, one of 1, 2, 4, 8, 16, 32

  void validate() const;
};

struct AmbiguityScores {
  int m1 = 0;      ///< best cost
  int m2 = 0;      ///< best cost among disparities more than one level from d_best
  int d_best = 0;  ///< lowest disparity achieving m1
};

/// m2/2 + m2/4 + m2/8 + m2/32 with truncating shifts, i.e. roughly 0.90625 * m2.
constexpr int shift_sum_threshold(int m2) noexcept {
  return (m2 >> 1) + (m2 >> 2) + (m2 >> 3) + (m2 >> 5);
}

/// Lowest index of the minimum cost. costs must be non-empty.
int winner(std::span<const std::uint16_t> costs) noexcept;

/// nullopt when no second minimum exists (fewer than two evaluable
/// disparities, or every other candidate is adjacent to the winner).
std::optional<AmbiguityScores> score_costs(std::span<const std::uint16_t> costs) noexcept;

/// Ratio test with the shift-sum threshold; flat m1 == m2 == 0 is rejected.
bool is_unambiguous(const AmbiguityScores& s) noexcept;

/// Evaluates every valid left pixel in raster order.
std::vector<SupportPoint> match_support(const census::CensusField& left,
                                        const census::CensusField& right, const SparseConfig& cfg,
                                        const simd::Kernels& kernels = simd::default_kernels());

struct Stride {
  int u = 1;
  int v = 1;
};
Stride downsample_stride(int denominator);

inline bool keep_after_downsample(const SupportPoint& p, Stride s) noexcept {
  return p.u % s.u == 0 && p.v % s.v == 0;
}

std::vector<SupportPoint> downsample_support(std::span<const SupportPoint> points, int denominator);

}  // namespace streamelas::sparse
