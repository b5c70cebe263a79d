#include "streamelas/sparse.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace streamelas::sparse {

void SparseConfig::validate() const {
  if (disparity_range < 2 || disparity_range > 256) {
    throw Error(ErrorCode::InvalidConfig,
                "disparity range must be in [2, 256], got " + std::to_string(disparity_range));
  }
  downsample_stride(downsample);
}

int winner(std::span<const std::uint16_t> costs) noexcept {
  int best = 0;
  for (int d = 1; d < static_cast<int>(costs.size()); ++d) {
    if (costs[d] < costs[best]) best = d;
  }
  return best;
}

std::optional<AmbiguityScores> score_costs(std::span<const std::uint16_t> costs) noexcept {
  if (costs.size() < 2) return std::nullopt;
  AmbiguityScores s;
  s.d_best = winner(costs);
  s.m1 = costs[s.d_best];
  int m2 = std::numeric_limits<int>::max();
  for (int d = 0; d < static_cast<int>(costs.size()); ++d) {
    if (d < s.d_best - 1 || d > s.d_best + 1) m2 = std::min<int>(m2, costs[d]);
  }
  if (m2 == std::numeric_limits<int>::max()) return std::nullopt;
  s.m2 = m2;
  return s;
}

bool is_unambiguous(const AmbiguityScores& s) noexcept {
  if (s.m1 == 0 && s.m2 == 0) return false;
  return s.m1 <= shift_sum_threshold(s.m2);
}

std::vector<SupportPoint> match_support(const census::CensusField& left,
                                        const census::CensusField& right, const SparseConfig& cfg,
                                        const simd::Kernels& kernels) {
  cfg.validate();
  if (left.width() != right.width() || left.height() != right.height() ||
      left.config().window != right.config().window) {
    throw Error(ErrorCode::ShapeError, "left and right census fields differ in shape or window");
  }
  const int width = left.width();
  const int height = left.height();
  const int r = left.config().radius();
  const int dmax = cfg.disparity_range - 1;

  std::vector<SupportPoint> points;
  std::vector<std::uint16_t> costs(cfg.disparity_range);
  std::vector<std::uint16_t> reverse_costs(cfg.disparity_range);

  for (int v = r; v < height - r; ++v) {
    const Descriptor* lrow = left.row(v);
    const Descriptor* rrow = right.row(v);
    for (int u = r; u < width - r; ++u) {
      const int count = std::min(dmax, u - r) + 1;
      kernels.hamming_costs(lrow[u], rrow + u, -1, count, costs.data());
      const auto scores = score_costs({costs.data(), std::size_t(count)});
      if (!scores || !is_unambiguous(*scores)) continue;

      if (cfg.lr_check) {
        const int ur = u - scores->d_best;
        const int back = std::min(dmax, (width - 1 - r) - ur) + 1;
        kernels.hamming_costs(rrow[ur], lrow + ur, +1, back, reverse_costs.data());
        if (winner({reverse_costs.data(), std::size_t(back)}) != scores->d_best) continue;
      }
      points.push_back({u, v, scores->d_best});
    }
  }
  return points;
}

Stride downsample_stride(int denominator) {
  switch (denominator) {
    case 1: return {1, 1};
    case 2: return {2, 1};
    case 4: return {2, 2};
    case 8: return {4, 2};
    case 16: return {4, 4};
    case 32: return {8, 4};
    default:
      throw Error(ErrorCode::InvalidConfig,
                  "downsample must be one of 1, 2, 4, 8, 16, 32; got " + std::to_string(denominator));
  }
}

std::vector<SupportPoint> downsample_support(std::span<const SupportPoint> points, int denominator) {
  const Stride s = downsample_stride(denominator);
  std::vector<SupportPoint> out;
  out.reserve(points.size() / denominator + 1);
  for (const SupportPoint& p : points) {
    if (keep_after_downsample(p, s)) out.push_back(p);
  }
  return out;
}

}  // namespace streamelas::sparse
