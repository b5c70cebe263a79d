#pragma once

#include <span>
#include <vector>

#include "streamelas/sparse.hpp"

namespace streamelas::filter {

using sparse::SupportPoint;

struct FilterConfig {
  int consistency_radius = 10;       ///< R_c, pixels
  int consistency_tolerance = 5;     ///< tau_c, disparity levels
  int min_consistent_neighbors = 2;  ///< k
  int redundancy_distance = 5;       ///< R_r, pixels along a row or column
  int redundancy_tolerance = 1;      ///< tau_r, disparity levels

  void validate() const;
};

/// Keeps a point when at least k other points lie inside its
/// (2R_c+1)^2 window with disparity within tau_c. Input must be row-major.
std::vector<SupportPoint> consistency_filter(std::span<const SupportPoint> points,
                                             const FilterConfig& cfg);

/// Both executors count window supporters the same way and share this verdict.
inline bool has_enough_support(int supporters, const FilterConfig& cfg) noexcept {
  return supporters >= cfg.min_consistent_neighbors;
}

/// Scans in stream order and drops a point when an earlier *kept* point on the
/// same row (|du| <= R_r) or the same column (|dv| <= R_r) has disparity
/// within tau_r. Decisions never look ahead, so any prefix of the input maps
/// to a prefix of the output.
std::vector<SupportPoint> redundancy_filter_backwards(std::span<const SupportPoint> points,
                                                      const FilterConfig& cfg);

/// Incremental form of redundancy_filter_backwards used by the stream executor.
class BackwardRedundancy {
 public:
  explicit BackwardRedundancy(const FilterConfig& cfg) : cfg_(cfg) {}

  /// Returns true when `p` is kept. Points must arrive in stream order.
  bool offer(const SupportPoint& p);

 private:
  struct Kept {
    int coord;
    int d;
  };
  FilterConfig cfg_;
  int row_ = -1;
  std::vector<Kept> row_kept_;                   // u, d of kept points on the current row
  std::vector<std::vector<Kept>> column_kept_;   // per u: v, d of recent kept points
};

}  // namespace streamelas::filter
