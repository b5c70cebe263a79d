#pragma once

#include <algorithm>
#include <functional>

#include "streamelas/census.hpp"
#include "streamelas/disparity_set.hpp"

namespace streamelas::dense {

struct DenseConfig {
  int window = 5;  ///< W_d, one of 3, 5, 7
  int disparity_range = 128;
  int median_radius = 0;  ///< 0 disables the median post-filter
  bool lr_check = false;  ///< invalidate when the right-to-left winner is more than 1 level off

  void validate() const;
};

/// Supplies the candidate disparities for pixel (u, v).
using CandidateProvider = std::function<DisparitySet(int u, int v)>;

/// Winner-take-all over each pixel's candidates that keep the right-image
/// match inside the census valid region (u - d >= W_d/2). Ties go to the
/// smaller disparity; pixels without a feasible candidate are invalid.
DisparityMap dense_match(const census::CensusField& left, const census::CensusField& right,
                         const CandidateProvider& candidates, const DenseConfig& cfg,
                         const simd::Kernels& kernels = simd::default_kernels());

/// Per-pixel decision shared by the batch and streaming executors.
/// `costs[i]` holds the cost of disparity lo + i for i in [0, hi - lo].
int pick_disparity(const DisparitySet& candidates, int lo, int hi, const std::uint16_t* costs) noexcept;

/// Feasible disparity window for left column u: [0, min(D-1, u - radius)].
inline int max_feasible_disparity(int u, int radius, int disparity_range) noexcept {
  return std::min(disparity_range - 1, u - radius);
}

/// Median of the valid values in the (2r+1)^2 neighbourhood of each valid
/// pixel (lower median for even counts). Invalid pixels stay invalid.
DisparityMap median_filter(const DisparityMap& map, int radius);

}  // namespace streamelas::dense
