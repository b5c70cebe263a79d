#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "streamelas/disparity_set.hpp"
#include "streamelas/image.hpp"
#include "streamelas/sparse.hpp"

namespace streamelas::prior {

using sparse::SupportPoint;

struct PriorConfig {
  int grid_size = 20;             ///< g, pixels per cell side
  bool grid_neighborhood = true;  ///< pool into the 3x3 cell neighbourhood, not just the own cell

  void validate() const;
};

class GridVectorField {
 public:
  GridVectorField() = default;
  GridVectorField(int width, int height, int disparity_range, int grid_size);

  int grid_size() const noexcept { return grid_size_; }
  int disparity_range() const noexcept { return range_; }
  int cells_u() const noexcept { return cells_.width(); }
  int cells_v() const noexcept { return cells_.height(); }

  const DisparitySet& cell(int cu, int cv) const noexcept { return cells_.at(cu, cv); }
  DisparitySet& cell(int cu, int cv) noexcept { return cells_.at(cu, cv); }
  const DisparitySet& at_pixel(int u, int v) const noexcept {
    return cells_.at(u / grid_size_, v / grid_size_);
  }

  friend bool operator==(const GridVectorField&, const GridVectorField&) = default;

 private:
  int grid_size_ = 0;
  int range_ = 0;
  Plane<DisparitySet> cells_;
};

/// Every point adds {d-1, d, d+1} to its own cell and, with the
/// neighbourhood flag, to the eight surrounding cells.
GridVectorField build_grid_vectors(std::span<const SupportPoint> points, int width, int height,
                                   int disparity_range, const PriorConfig& cfg);

struct Triangulation {
  std::vector<SupportPoint> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< counter-clockwise in (u, v)
};

/// Bowyer-Watson insertion in input order with exact integer predicates.
/// Duplicate (u, v) positions keep their first occurrence. Throws
/// DegenerateInput for fewer than 3 distinct or all-collinear points.
Triangulation delaunay(std::span<const SupportPoint> points);

/// Exact predicates on integer coordinates, exposed for tests and oracles.
/// orient > 0: c lies left of a->b. incircle > 0: d strictly inside the
/// circumcircle of counter-clockwise (a, b, c).
int orient(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t cx,
           std::int64_t cy) noexcept;
int incircle(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t cx,
             std::int64_t cy, std::int64_t dx, std::int64_t dy) noexcept;

/// Static, image-sized plane prior. Uncovered pixels lie outside the mesh.
struct PlanePriorMatrix {
  Plane<float> prior;
  Plane<std::uint8_t> covered;

  int width() const noexcept { return prior.width(); }
  int height() const noexcept { return prior.height(); }
  bool is_covered(int u, int v) const noexcept { return covered.at(u, v) != 0; }
  /// Nearest integer, halves rounded up.
  int rounded(int u, int v) const noexcept;

  friend bool operator==(const PlanePriorMatrix&, const PlanePriorMatrix&) = default;
};

/// Visits every pixel owned by a triangle exactly once with the barycentric
/// prior. Edge and vertex pixels follow a top-left rule; hull boundary pixels
/// the rule leaves unowned go to the first triangle containing them.
void for_each_rasterized_pixel(const Triangulation& tri, int width, int height,
                               const std::function<void(int u, int v, int triangle, double prior)>& visit);

PlanePriorMatrix rasterize_prior(const Triangulation& tri, int width, int height);

/// Matrix with no covered pixel, used when triangulation is degenerate.
PlanePriorMatrix empty_prior(int width, int height);

/// Cell mask united with round(prior) +/- 1 on covered pixels; an empty
/// result widens to the full range.
DisparitySet candidate_set(int u, int v, const GridVectorField& grid, const PlanePriorMatrix& plane,
                           int disparity_range);

/// Both prior structures the dense stage reads.
struct PriorField {
  GridVectorField grid;
  PlanePriorMatrix plane;
  bool has_mesh = false;

  DisparitySet candidates(int u, int v) const {
    return candidate_set(u, v, grid, plane, grid.disparity_range());
  }

  friend bool operator==(const PriorField&, const PriorField&) = default;
};

}  // namespace streamelas::prior
