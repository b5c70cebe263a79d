#include "streamelas/stream/stages.hpp"

#include <algorithm>
#include <cstdlib>

namespace streamelas::stream {

namespace {

std::int64_t census_lookahead(int width, const census::CensusConfig& cfg) {
  return static_cast<std::int64_t>(cfg.radius()) * width + cfg.radius();
}

bool inside(int u, int v, int width, int height, int r) {
  return u >= r && v >= r && u < width - r && v < height - r;
}

}  // namespace

CensusStage::CensusStage(std::string name, int width, int height, census::CensusConfig cfg, int depth)
    : ClockedStage(std::move(name), width, height, census_lookahead(width, cfg), depth),
      cfg_(cfg),
      lines_(2 * cfg.window, width),
      window_(cfg.window),
      column_(cfg.window) {
  cfg_.validate();
}

void CensusStage::consume(std::int64_t index, const std::uint8_t& px) {
  const int c = static_cast<int>(index % width());
  lines_.push(c, px);
  const int w = cfg_.window;
  for (int y = 0; y < w; ++y) column_[y] = lines_.recent(c, w - 1 - y);
  window_.shift_in(column_);
  peak_rows_ = std::max(peak_rows_, lines_.resident_rows());
}

CensusToken CensusStage::compute(std::int64_t index) {
  const int u = static_cast<int>(index % width());
  const int v = static_cast<int>(index / width());
  const int r = cfg_.radius();
  CensusToken token;
  if (!inside(u, v, width(), height(), r)) return token;
  // The window was completed by the pixel that triggered this computation.
  if (received() - 1 != index + census_lookahead(width(), cfg_)) {
    throw std::logic_error("census window out of step with its centre pixel");
  }
  const std::uint8_t center = window_.at(r, r);
  const int bits = cfg_.bits();
  int k = 0;
  for (int y = 0; y < cfg_.window; ++y) {
    for (int x = 0; x < cfg_.window; ++x) {
      if (x == r && y == r) continue;
      if (window_.at(x, y) < center) token.descriptor.set_bit(bits - 1 - k);
      ++k;
    }
  }
  token.valid = true;
  return token;
}

SparseStage::SparseStage(int width, int height, int census_radius, const sparse::SparseConfig& cfg,
                         int depth)
    : ClockedStage("sparse_match", width, height, cfg.lr_check ? cfg.disparity_range - 1 : 0, depth),
      radius_(census_radius),
      cfg_(cfg),
      stride_(sparse::downsample_stride(cfg.downsample)),
      ring_(static_cast<std::size_t>(2 * cfg.disparity_range + 1)),
      costs_(cfg.disparity_range) {
  cfg_.validate();
}

void SparseStage::consume(std::int64_t index, const CensusPair& in) {
  ring_[index % ring_.size()] = in;
}

Candidate SparseStage::compute(std::int64_t index) {
  const int u = static_cast<int>(index % width());
  const int v = static_cast<int>(index / width());
  if (!inside(u, v, width(), height(), radius_)) return std::nullopt;
  if (!sparse::keep_after_downsample({u, v, 0}, stride_)) return std::nullopt;

  const int dmax = cfg_.disparity_range - 1;
  const int count = std::min(dmax, u - radius_) + 1;
  const Descriptor& left = slot(index).first.descriptor;
  for (int d = 0; d < count; ++d) {
    costs_[d] = static_cast<std::uint16_t>(hamming(left, slot(index - d).second.descriptor));
  }
  const auto scores = sparse::score_costs({costs_.data(), std::size_t(count)});
  if (!scores || !sparse::is_unambiguous(*scores)) return std::nullopt;

  if (cfg_.lr_check) {
    const int ur = u - scores->d_best;
    const std::int64_t base = index - scores->d_best;
    const int back = std::min(dmax, (width() - 1 - radius_) - ur) + 1;
    const Descriptor& right = slot(base).second.descriptor;
    for (int d = 0; d < back; ++d) {
      costs_[d] = static_cast<std::uint16_t>(hamming(right, slot(base + d).first.descriptor));
    }
    if (sparse::winner({costs_.data(), std::size_t(back)}) != scores->d_best) return std::nullopt;
  }
  return sparse::SupportPoint{u, v, scores->d_best};
}

FilterStage::FilterStage(int width, int height, const filter::FilterConfig& cfg, int depth)
    : ClockedStage("filter", width, height,
                   static_cast<std::int64_t>(cfg.consistency_radius) * width + cfg.consistency_radius,
                   depth),
      cfg_(cfg),
      ring_rows_(std::min(height, 2 * cfg.consistency_radius + 2)),
      rows_(static_cast<std::size_t>(ring_rows_) * width, -1),
      redundancy_(cfg) {
  cfg_.validate();
}

void FilterStage::consume(std::int64_t index, const Candidate& in) {
  const int u = static_cast<int>(index % width());
  const int v = static_cast<int>(index / width());
  if (u == 0) std::fill_n(&cell(0, v), width(), std::int16_t{-1});
  if (in) cell(u, v) = static_cast<std::int16_t>(in->d);
}

Candidate FilterStage::compute(std::int64_t index) {
  const int u = static_cast<int>(index % width());
  const int v = static_cast<int>(index / width());
  const int d = cell(u, v);
  if (d < 0) return std::nullopt;
  const int rc = cfg_.consistency_radius;
  int supporters = 0;
  for (int y = std::max(0, v - rc); y <= std::min(height() - 1, v + rc); ++y) {
    for (int x = std::max(0, u - rc); x <= std::min(width() - 1, u + rc); ++x) {
      const int e = cell(x, y);
      if (e >= 0 && (x != u || y != v) && std::abs(e - d) <= cfg_.consistency_tolerance) ++supporters;
    }
  }
  if (!filter::has_enough_support(supporters, cfg_)) return std::nullopt;
  const sparse::SupportPoint p{u, v, d};
  if (!redundancy_.offer(p)) return std::nullopt;
  return p;
}

DenseStage::DenseStage(int width, int height, int census_radius, const dense::DenseConfig& cfg,
                       const prior::PriorField& priors, int depth)
    : ClockedStage("dense_match", width, height, cfg.lr_check ? cfg.disparity_range - 1 : 0, depth),
      radius_(census_radius),
      cfg_(cfg),
      priors_(priors),
      ring_(static_cast<std::size_t>(2 * cfg.disparity_range + 1)),
      costs_(cfg.disparity_range) {
  cfg_.validate();
}

void DenseStage::consume(std::int64_t index, const CensusPair& in) {
  ring_[index % ring_.size()] = in;
}

std::uint16_t DenseStage::compute(std::int64_t index) {
  const int u = static_cast<int>(index % width());
  const int v = static_cast<int>(index / width());
  if (!inside(u, v, width(), height(), radius_)) return kInvalidDisparity;
  const int top = dense::max_feasible_disparity(u, radius_, cfg_.disparity_range);
  if (top < 0) return kInvalidDisparity;
  const DisparitySet set = priors_.candidates(u, v);
  int lo = -1;
  int hi = -1;
  set.for_each([&](int d) {
    if (d > top) return;
    if (lo < 0) lo = d;
    hi = d;
  });
  if (lo < 0) return kInvalidDisparity;

  const Descriptor& left = slot(index).first.descriptor;
  for (int d = lo; d <= hi; ++d) {
    costs_[d - lo] = static_cast<std::uint16_t>(hamming(left, slot(index - d).second.descriptor));
  }
  const int d = dense::pick_disparity(set, lo, hi, costs_.data());
  if (cfg_.lr_check) {
    const int ur = u - d;
    const std::int64_t base = index - d;
    const int back = std::min(cfg_.disparity_range - 1, (width() - 1 - radius_) - ur) + 1;
    const Descriptor& right = slot(base).second.descriptor;
    for (int e = 0; e < back; ++e) {
      costs_[e] = static_cast<std::uint16_t>(hamming(right, slot(base + e).first.descriptor));
    }
    if (std::abs(sparse::winner({costs_.data(), std::size_t(back)}) - d) > 1) return kInvalidDisparity;
  }
  return static_cast<std::uint16_t>(d);
}

}  // namespace streamelas::stream
