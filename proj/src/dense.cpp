#include "streamelas/dense.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "streamelas/sparse.hpp"

namespace streamelas::dense {

void DenseConfig::validate() const {
  if (window != 3 && window != 5 && window != 7) {
    throw Error(ErrorCode::InvalidConfig, "dense window must be 3, 5 or 7, got " + std::to_string(window));
  }
  if (disparity_range < 2 || disparity_range > DisparitySet::kCapacity) {
    throw Error(ErrorCode::InvalidConfig, "disparity range must be in [2, 256]");
  }
  if (median_radius < 0) {
    throw Error(ErrorCode::InvalidConfig, "median radius must be >= 0");
  }
}

int pick_disparity(const DisparitySet& candidates, int lo, int hi, const std::uint16_t* costs) noexcept {
  int best = -1;
  int best_cost = std::numeric_limits<int>::max();
  candidates.for_each([&](int d) {
    if (d < lo || d > hi) return;
    if (costs[d - lo] < best_cost) {
      best_cost = costs[d - lo];
      best = d;
    }
  });
  return best;
}

namespace {

// Lowest and highest candidate inside [0, hi]; false when none is feasible.
bool feasible_span(const DisparitySet& set, int hi, int& lo_out, int& hi_out) {
  int lo = -1;
  int top = -1;
  set.for_each([&](int d) {
    if (d > hi) return;
    if (lo < 0) lo = d;
    top = d;
  });
  if (lo < 0) return false;
  lo_out = lo;
  hi_out = top;
  return true;
}

}  // namespace

DisparityMap dense_match(const census::CensusField& left, const census::CensusField& right,
                         const CandidateProvider& candidates, const DenseConfig& cfg,
                         const simd::Kernels& kernels) {
  cfg.validate();
  if (left.width() != right.width() || left.height() != right.height() ||
      left.config().window != right.config().window) {
    throw Error(ErrorCode::ShapeError, "left and right census fields differ in shape or window");
  }
  const int width = left.width();
  const int height = left.height();
  const int r = left.config().radius();
  DisparityMap out(width, height, kInvalidDisparity);
  std::vector<std::uint16_t> costs(cfg.disparity_range);
  std::vector<std::uint16_t> reverse(cfg.disparity_range);

  for (int v = r; v < height - r; ++v) {
    const Descriptor* lrow = left.row(v);
    const Descriptor* rrow = right.row(v);
    for (int u = r; u < width - r; ++u) {
      const int top = max_feasible_disparity(u, r, cfg.disparity_range);
      const DisparitySet set = candidates(u, v);
      int lo = 0;
      int hi = 0;
      if (top < 0 || !feasible_span(set, top, lo, hi)) continue;
      // costs[i] = hamming(left(u), right(u - lo - i))
      kernels.hamming_costs(lrow[u], rrow + (u - lo), -1, hi - lo + 1, costs.data());
      const int d = pick_disparity(set, lo, hi, costs.data());
      if (cfg.lr_check) {
        const int ur = u - d;
        const int back = std::min(cfg.disparity_range - 1, (width - 1 - r) - ur) + 1;
        kernels.hamming_costs(rrow[ur], lrow + ur, +1, back, reverse.data());
        const int d_rl = sparse::winner({reverse.data(), std::size_t(back)});
        if (std::abs(d_rl - d) > 1) continue;
      }
      out.at(u, v) = static_cast<std::uint16_t>(d);
    }
  }
  return out;
}

DisparityMap median_filter(const DisparityMap& map, int radius) {
  if (radius < 1) return map;
  DisparityMap out(map.width(), map.height(), kInvalidDisparity);
  std::vector<std::uint16_t> window;
  window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
  for (int v = 0; v < map.height(); ++v) {
    for (int u = 0; u < map.width(); ++u) {
      if (map.at(u, v) == kInvalidDisparity) continue;
      window.clear();
      for (int y = std::max(0, v - radius); y <= std::min(map.height() - 1, v + radius); ++y) {
        for (int x = std::max(0, u - radius); x <= std::min(map.width() - 1, u + radius); ++x) {
          if (map.at(x, y) != kInvalidDisparity) window.push_back(map.at(x, y));
        }
      }
      const auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
      std::nth_element(window.begin(), mid, window.end());
      out.at(u, v) = *mid;
    }
  }
  return out;
}

}  // namespace streamelas::dense
