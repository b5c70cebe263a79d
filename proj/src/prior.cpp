#include "streamelas/prior.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamelas::prior {

void PriorConfig::validate() const {
  if (grid_size < 1) {
    throw Error(ErrorCode::InvalidConfig, "grid size must be positive");
  }
}

GridVectorField::GridVectorField(int width, int height, int disparity_range, int grid_size)
    : grid_size_(grid_size),
      range_(disparity_range),
      cells_((width + grid_size - 1) / grid_size, (height + grid_size - 1) / grid_size) {}

GridVectorField build_grid_vectors(std::span<const SupportPoint> points, int width, int height,
                                   int disparity_range, const PriorConfig& cfg) {
  cfg.validate();
  GridVectorField grid(width, height, disparity_range, cfg.grid_size);
  const int reach = cfg.grid_neighborhood ? 1 : 0;
  for (const SupportPoint& p : points) {
    DisparitySet contribution;
    contribution.insert_with_neighbors(p.d, disparity_range);
    const int cu = p.u / cfg.grid_size;
    const int cv = p.v / cfg.grid_size;
    for (int y = std::max(0, cv - reach); y <= std::min(grid.cells_v() - 1, cv + reach); ++y) {
      for (int x = std::max(0, cu - reach); x <= std::min(grid.cells_u() - 1, cu + reach); ++x) {
        grid.cell(x, y) |= contribution;
      }
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Exact predicates

namespace {

using Wide = __int128;
using Huge = boost::multiprecision::int256_t;

template <typename T>
int sign(const T& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

// Real vertices satisfy |coord| < 2^20 so the 128-bit path cannot overflow;
// anything touching the bounding triangle goes through 256-bit arithmetic.
constexpr std::int64_t kMaxCoord = std::int64_t{1} << 20;
constexpr std::int64_t kSuper = std::int64_t{1} << 56;

template <typename T>
int incircle_impl(T adx, T ady, T bdx, T bdy, T cdx, T cdy) {
  const T alift = adx * adx + ady * ady;
  const T blift = bdx * bdx + bdy * bdy;
  const T clift = cdx * cdx + cdy * cdy;
  const T det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                clift * (adx * bdy - bdx * ady);
  return sign(det);
}

bool small(std::int64_t x) { return x > -kMaxCoord * 2 && x < kMaxCoord * 2; }

}  // namespace

int orient(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t cx,
           std::int64_t cy) noexcept {
  const Wide det = Wide(bx - ax) * Wide(cy - ay) - Wide(by - ay) * Wide(cx - ax);
  return sign(det);
}

int incircle(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t cx,
             std::int64_t cy, std::int64_t dx, std::int64_t dy) noexcept {
  if (small(ax) && small(ay) && small(bx) && small(by) && small(cx) && small(cy) && small(dx) &&
      small(dy)) {
    return incircle_impl<Wide>(ax - dx, ay - dy, bx - dx, by - dy, cx - dx, cy - dy);
  }
  return incircle_impl<Huge>(Huge(ax - dx), Huge(ay - dy), Huge(bx - dx), Huge(by - dy),
                             Huge(cx - dx), Huge(cy - dy));
}

// ---------------------------------------------------------------------------
// Bowyer-Watson

namespace {

struct Tri {
  std::array<int, 3> v;   // counter-clockwise
  std::array<int, 3> nb;  // nb[i] is across the edge opposite v[i], -1 if none
  bool alive = true;
};

class Mesh {
 public:
  explicit Mesh(std::span<const SupportPoint> pts) {
    xs_.reserve(pts.size() + 3);
    ys_.reserve(pts.size() + 3);
    for (const SupportPoint& p : pts) {
      xs_.push_back(p.u);
      ys_.push_back(p.v);
    }
    real_ = static_cast<int>(pts.size());
    const int a = add_vertex(-kSuper, -kSuper);
    const int b = add_vertex(kSuper, -kSuper);
    const int c = add_vertex(0, kSuper);
    tris_.push_back({{a, b, c}, {-1, -1, -1}, true});
  }

  void insert(int p) {
    const int start = locate(p);
    if (start < 0) return;  // coincides with an existing vertex

    // Cavity: triangles whose circumcircle strictly contains p.
    cavity_.clear();
    stack_.clear();
    stack_.push_back(start);
    in_cavity_.resize(tris_.size(), false);
    in_cavity_[start] = true;
    while (!stack_.empty()) {
      const int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int n : tris_[t].nb) {
        if (n >= 0 && !in_cavity_[n] && in_circle(n, p)) {
          in_cavity_[n] = true;
          stack_.push_back(n);
        }
      }
    }

    // Fan new triangles from the cavity boundary to p.
    created_.clear();
    for (int t : cavity_) {
      for (int i = 0; i < 3; ++i) {
        const int n = tris_[t].nb[i];
        if (n >= 0 && in_cavity_[n]) continue;
        const int a = tris_[t].v[(i + 1) % 3];
        const int b = tris_[t].v[(i + 2) % 3];
        const int nt = allocate({{a, b, p}, {-1, -1, n}, true});
        if (n >= 0) {
          for (int j = 0; j < 3; ++j) {
            if (tris_[n].nb[j] == t) tris_[n].nb[j] = nt;
          }
        }
        created_.push_back(nt);
      }
    }
    for (int t : cavity_) {
      tris_[t].alive = false;
      in_cavity_[t] = false;
      free_.push_back(t);
    }
    // Link the fan: triangle (a, b, p) meets (b, c, p) across edge (b, p)
    // and (x, a, p) across edge (p, a).
    for (int t : created_) {
      const int a = tris_[t].v[0];
      const int b = tris_[t].v[1];
      for (int o : created_) {
        if (o == t) continue;
        if (tris_[o].v[0] == b) tris_[t].nb[0] = o;
        if (tris_[o].v[1] == a) tris_[t].nb[1] = o;
      }
    }
    last_ = created_.empty() ? last_ : created_.back();
  }

  Triangulation extract(std::span<const SupportPoint> pts) const {
    Triangulation out;
    out.vertices.assign(pts.begin(), pts.end());
    for (const Tri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= real_ || t.v[1] >= real_ || t.v[2] >= real_) continue;
      out.triangles.push_back(t.v);
    }
    return out;
  }

 private:
  int add_vertex(std::int64_t x, std::int64_t y) {
    xs_.push_back(x);
    ys_.push_back(y);
    return static_cast<int>(xs_.size()) - 1;
  }

  int allocate(const Tri& t) {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tris_[id] = t;
      return id;
    }
    tris_.push_back(t);
    if (in_cavity_.size() < tris_.size()) in_cavity_.resize(tris_.size(), false);
    return static_cast<int>(tris_.size()) - 1;
  }

  int orient_at(int a, int b, int p) const {
    return orient(xs_[a], ys_[a], xs_[b], ys_[b], xs_[p], ys_[p]);
  }

  bool in_circle(int t, int p) const {
    const auto& v = tris_[t].v;
    return incircle(xs_[v[0]], ys_[v[0]], xs_[v[1]], ys_[v[1]], xs_[v[2]], ys_[v[2]], xs_[p],
                    ys_[p]) > 0;
  }

  // Visibility walk from the most recent triangle. Returns -1 when p
  // coincides with a vertex of the containing triangle.
  int locate(int p) const {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    for (;;) {
      const Tri& tri = tris_[t];
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        if (orient_at(tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], p) < 0) {
          next = tri.nb[i];
          break;
        }
      }
      if (next < 0) break;
      t = next;
    }
    for (int i = 0; i < 3; ++i) {
      const int q = tris_[t].v[i];
      if (xs_[q] == xs_[p] && ys_[q] == ys_[p]) return -1;
    }
    return t;
  }

  std::vector<std::int64_t> xs_;
  std::vector<std::int64_t> ys_;
  int real_ = 0;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  int last_ = 0;
  std::vector<char> in_cavity_;
  std::vector<int> cavity_;
  std::vector<int> stack_;
  std::vector<int> created_;
};

}  // namespace

Triangulation delaunay(std::span<const SupportPoint> points) {
  std::vector<SupportPoint> unique;
  unique.reserve(points.size());
  std::set<std::pair<int, int>> seen;
  for (const SupportPoint& p : points) {
    if (p.u < 0 || p.v < 0 || p.u >= kMaxCoord || p.v >= kMaxCoord) {
      throw Error(ErrorCode::DegenerateInput, "support point coordinates out of range");
    }
    if (seen.emplace(p.u, p.v).second) unique.push_back(p);
  }
  if (unique.size() < 3) {
    throw Error(ErrorCode::DegenerateInput,
                "need at least 3 distinct points, got " + std::to_string(unique.size()));
  }
  Mesh mesh(unique);
  for (int i = 0; i < static_cast<int>(unique.size()); ++i) mesh.insert(i);
  Triangulation out = mesh.extract(unique);
  if (out.triangles.empty()) {
    throw Error(ErrorCode::DegenerateInput, "all support points are collinear");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rasterisation

namespace {

// Owning rule for pixels exactly on an edge a->b of a counter-clockwise
// triangle. Equivalent to nudging the pixel by (-eps, -eps^2), so for every
// shared edge and every interior vertex exactly one triangle owns the pixel.
bool owns_edge(std::int64_t ex, std::int64_t ey) noexcept { return ey > 0 || (ey == 0 && ex < 0); }

}  // namespace

void for_each_rasterized_pixel(const Triangulation& tri, int width, int height,
                               const std::function<void(int, int, int, double)>& visit) {
  Plane<std::uint8_t> taken(width, height, 0);

  struct Setup {
    std::int64_t x[3], y[3];
    double d[3];
    std::int64_t area2;
    int u0, u1, v0, v1;
  };
  std::vector<Setup> setups;
  setups.reserve(tri.triangles.size());
  for (const auto& t : tri.triangles) {
    Setup s{};
    for (int i = 0; i < 3; ++i) {
      const SupportPoint& p = tri.vertices[t[i]];
      s.x[i] = p.u;
      s.y[i] = p.v;
      s.d[i] = p.d;
    }
    s.area2 = (s.x[1] - s.x[0]) * (s.y[2] - s.y[0]) - (s.y[1] - s.y[0]) * (s.x[2] - s.x[0]);
    s.u0 = static_cast<int>(std::max<std::int64_t>(0, std::min({s.x[0], s.x[1], s.x[2]})));
    s.u1 = static_cast<int>(std::min<std::int64_t>(width - 1, std::max({s.x[0], s.x[1], s.x[2]})));
    s.v0 = static_cast<int>(std::max<std::int64_t>(0, std::min({s.y[0], s.y[1], s.y[2]})));
    s.v1 = static_cast<int>(std::min<std::int64_t>(height - 1, std::max({s.y[0], s.y[1], s.y[2]})));
    setups.push_back(s);
  }

  // Edge functions w[i] weight vertex i: w[i] = orient(v[i+1], v[i+2], p).
  auto weights = [](const Setup& s, int u, int v, std::int64_t w[3]) {
    for (int i = 0; i < 3; ++i) {
      const int a = (i + 1) % 3;
      const int b = (i + 2) % 3;
      w[i] = (s.x[b] - s.x[a]) * (v - s.y[a]) - (s.y[b] - s.y[a]) * (u - s.x[a]);
    }
  };
  auto interpolate = [](const Setup& s, const std::int64_t w[3]) {
    return (static_cast<double>(w[0]) * s.d[0] + static_cast<double>(w[1]) * s.d[1] +
            static_cast<double>(w[2]) * s.d[2]) /
           static_cast<double>(s.area2);
  };

  for (int t = 0; t < static_cast<int>(setups.size()); ++t) {
    const Setup& s = setups[t];
    if (s.area2 <= 0) continue;
    for (int v = s.v0; v <= s.v1; ++v) {
      for (int u = s.u0; u <= s.u1; ++u) {
        std::int64_t w[3];
        weights(s, u, v, w);
        bool inside = true;
        for (int i = 0; i < 3 && inside; ++i) {
          if (w[i] < 0) {
            inside = false;
          } else if (w[i] == 0) {
            const int a = (i + 1) % 3;
            const int b = (i + 2) % 3;
            inside = owns_edge(s.x[b] - s.x[a], s.y[b] - s.y[a]);
          }
        }
        if (!inside) continue;
        taken.at(u, v) = 1;
        visit(u, v, t, interpolate(s, w));
      }
    }
  }

  // Closed-boundary pixels of the hull that no triangle owned yet.
  for (int t = 0; t < static_cast<int>(setups.size()); ++t) {
    const Setup& s = setups[t];
    if (s.area2 <= 0) continue;
    for (int v = s.v0; v <= s.v1; ++v) {
      for (int u = s.u0; u <= s.u1; ++u) {
        if (taken.at(u, v)) continue;
        std::int64_t w[3];
        weights(s, u, v, w);
        if (w[0] < 0 || w[1] < 0 || w[2] < 0) continue;
        taken.at(u, v) = 1;
        visit(u, v, t, interpolate(s, w));
      }
    }
  }
}

PlanePriorMatrix empty_prior(int width, int height) {
  return PlanePriorMatrix{Plane<float>(width, height, 0.0f), Plane<std::uint8_t>(width, height, 0)};
}

PlanePriorMatrix rasterize_prior(const Triangulation& tri, int width, int height) {
  PlanePriorMatrix out = empty_prior(width, height);
  for_each_rasterized_pixel(tri, width, height, [&](int u, int v, int, double prior) {
    out.prior.at(u, v) = static_cast<float>(prior);
    out.covered.at(u, v) = 1;
  });
  return out;
}

int PlanePriorMatrix::rounded(int u, int v) const noexcept {
  return static_cast<int>(std::floor(prior.at(u, v) + 0.5f));
}

DisparitySet candidate_set(int u, int v, const GridVectorField& grid, const PlanePriorMatrix& plane,
                           int disparity_range) {
  DisparitySet set = grid.at_pixel(u, v);
  if (plane.is_covered(u, v)) set.insert_with_neighbors(plane.rounded(u, v), disparity_range);
  if (set.empty()) set.insert_all(disparity_range);
  return set;
}

}  // namespace streamelas::prior
