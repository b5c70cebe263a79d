#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "streamelas/error.hpp"

namespace streamelas {

/// Dense row-major plane; pixel (u, v) lives at index v * width + u.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::ShapeError, "image dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Plane(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::ShapeError, "image dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(ErrorCode::ShapeError, "pixel buffer length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int u, int v) const noexcept {
    return static_cast<std::size_t>(v) * width_ + u;
  }
  T& at(int u, int v) noexcept { return data_[index(u, v)]; }
  const T& at(int u, int v) const noexcept { return data_[index(u, v)]; }

  std::span<T> row(int v) noexcept { return {data_.data() + index(0, v), std::size_t(width_)}; }
  std::span<const T> row(int v) const noexcept {
    return {data_.data() + index(0, v), std::size_t(width_)};
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }
  const T* data() const noexcept { return data_.data(); }
  T* data() noexcept { return data_.data(); }

  bool same_shape(int w, int h) const noexcept { return width_ == w && height_ == h; }
  template <typename U>
  bool same_shape(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Plane<std::uint8_t>;

inline constexpr std::uint16_t kInvalidDisparity = std::numeric_limits<std::uint16_t>::max();

/// Per-pixel integer disparity; kInvalidDisparity marks pixels with no estimate.
using DisparityMap = Plane<std::uint16_t>;

/// KITTI encoding: value / 256 is the disparity in pixels, 0 means no ground truth.
struct GroundTruth {
  Plane<std::uint16_t> raw;

  int width() const noexcept { return raw.width(); }
  int height() const noexcept { return raw.height(); }
  bool has(int u, int v) const noexcept { return raw.at(u, v) != 0; }
  double disparity(int u, int v) const noexcept { return raw.at(u, v) / 256.0; }
};

}  // namespace streamelas
