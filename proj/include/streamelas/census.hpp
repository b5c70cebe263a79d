#pragma once

#include <vector>

#include "streamelas/descriptor.hpp"
#include "streamelas/image.hpp"
#include "streamelas/simd/kernels.hpp"

namespace streamelas::census {

struct CensusConfig {
  int window = 9;  ///< odd, 3..13

  int radius() const noexcept { return window / 2; }
  int bits() const noexcept { return window * window - 1; }
  void validate() const;
};

/// One descriptor per pixel. Pixels closer than radius() to a border hold the
/// zero descriptor and report valid() == false.
class CensusField {
 public:
  CensusField() = default;
  CensusField(int width, int height, CensusConfig cfg);

  int width() const noexcept { return descriptors_.width(); }
  int height() const noexcept { return descriptors_.height(); }
  const CensusConfig& config() const noexcept { return cfg_; }

  bool valid(int u, int v) const noexcept {
    const int r = cfg_.radius();
    return u >= r && v >= r && u < width() - r && v < height() - r;
  }
  const Descriptor& at(int u, int v) const noexcept { return descriptors_.at(u, v); }
  Descriptor& at(int u, int v) noexcept { return descriptors_.at(u, v); }
  const Descriptor* row(int v) const noexcept { return descriptors_.row(v).data(); }
  Descriptor* row(int v) noexcept { return descriptors_.row(v).data(); }

  friend bool operator==(const CensusField& a, const CensusField& b) {
    return a.cfg_.window == b.cfg_.window && a.descriptors_ == b.descriptors_;
  }

 private:
  CensusConfig cfg_;
  Plane<Descriptor> descriptors_;
};

/// Bit k (row-major over the window, centre skipped) is set iff that
/// neighbour is strictly darker than the centre; the first neighbour is the
/// most significant of the W*W-1 bits.
CensusField census_transform(const GrayImage& img, CensusConfig cfg,
                             const simd::Kernels& kernels = simd::default_kernels());

using streamelas::hamming;

}  // namespace streamelas::census
