#include "streamelas/filter.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "streamelas/image.hpp"

namespace streamelas::filter {

void FilterConfig::validate() const {
  if (consistency_radius < 0 || consistency_tolerance < 0 || min_consistent_neighbors < 0 ||
      redundancy_distance < 0 || redundancy_tolerance < 0) {
    throw Error(ErrorCode::InvalidConfig, "filter parameters must be non-negative");
  }
}

std::vector<SupportPoint> consistency_filter(std::span<const SupportPoint> points,
                                             const FilterConfig& cfg) {
  cfg.validate();
  if (points.empty()) return {};
  int width = 0;
  int height = 0;
  for (const SupportPoint& p : points) {
    width = std::max(width, p.u + 1);
    height = std::max(height, p.v + 1);
  }
  Plane<std::int16_t> disparity(width, height, std::int16_t{-1});
  for (const SupportPoint& p : points) disparity.at(p.u, p.v) = static_cast<std::int16_t>(p.d);

  const int rc = cfg.consistency_radius;
  std::vector<SupportPoint> kept;
  kept.reserve(points.size());
  for (const SupportPoint& p : points) {
    int supporters = 0;
    for (int v = std::max(0, p.v - rc); v <= std::min(height - 1, p.v + rc); ++v) {
      for (int u = std::max(0, p.u - rc); u <= std::min(width - 1, p.u + rc); ++u) {
        const int d = disparity.at(u, v);
        if (d >= 0 && (u != p.u || v != p.v) && std::abs(d - p.d) <= cfg.consistency_tolerance) {
          ++supporters;
        }
      }
    }
    if (has_enough_support(supporters, cfg)) kept.push_back(p);
  }
  return kept;
}

bool BackwardRedundancy::offer(const SupportPoint& p) {
  const int rr = cfg_.redundancy_distance;
  const int tol = cfg_.redundancy_tolerance;
  if (p.v != row_) {
    row_ = p.v;
    row_kept_.clear();
  }
  for (const Kept& q : row_kept_) {
    if (p.u - q.coord <= rr && std::abs(p.d - q.d) <= tol) return false;
  }
  if (static_cast<int>(column_kept_.size()) <= p.u) column_kept_.resize(p.u + 1);
  auto& column = column_kept_[p.u];
  std::erase_if(column, [&](const Kept& q) { return p.v - q.coord > rr; });
  for (const Kept& q : column) {
    if (std::abs(p.d - q.d) <= tol) return false;
  }
  std::erase_if(row_kept_, [&](const Kept& q) { return p.u - q.coord > rr; });
  row_kept_.push_back({p.u, p.d});
  column.push_back({p.v, p.d});
  return true;
}

std::vector<SupportPoint> redundancy_filter_backwards(std::span<const SupportPoint> points,
                                                      const FilterConfig& cfg) {
  cfg.validate();
  BackwardRedundancy scan(cfg);
  std::vector<SupportPoint> kept;
  for (const SupportPoint& p : points) {
    if (scan.offer(p)) kept.push_back(p);
  }
  return kept;
}

}  // namespace streamelas::filter
