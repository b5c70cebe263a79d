#pragma once

#include <cstdint>
#include <functional>

#include "streamelas/pipeline.hpp"

namespace streamelas::synthetic {

/// Uniform random intensities; identical output for identical seed.
GrayImage random_texture(int width, int height, std::uint64_t seed);

struct Scene {
  StereoPair pair;
  /// True disparity of each left pixel, -1 where the match falls outside the right image.
  Plane<float> truth;
};

/// Fronto-parallel scene: left(u, v) == right(u - shift, v).
Scene constant_shift(int width, int height, int shift, std::uint64_t seed);

/// Each row v is shifted by round(disparity(v)); truth holds the unrounded
/// value, so a scene built from planes in v has planar truth.
Scene row_shift(int width, int height, const std::function<double(int v)>& disparity,
                std::uint64_t seed);

/// KITTI 16-bit encoding of a truth plane (round(d * 256), 0 where unknown).
GroundTruth to_ground_truth(const Plane<float>& truth);

}  // namespace streamelas::synthetic
