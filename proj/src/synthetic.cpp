#include "streamelas/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace streamelas::synthetic {

GrayImage random_texture(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(width, height);
  for (auto& px : img.pixels()) px = static_cast<std::uint8_t>(rng() >> 56);
  return img;
}

Scene row_shift(int width, int height, const std::function<double(int v)>& disparity,
                std::uint64_t seed) {
  std::vector<int> shifts(height);
  int widest = 0;
  for (int v = 0; v < height; ++v) {
    const double d = disparity(v);
    if (d < 0) throw Error(ErrorCode::InvalidConfig, "negative disparity in synthetic scene");
    shifts[v] = static_cast<int>(std::lround(d));
    widest = std::max(widest, shifts[v]);
  }
  // Right row v samples the base texture at x + shift(v); left rows sample it directly.
  const GrayImage base = random_texture(width + widest, height, seed);
  Scene scene{{GrayImage(width, height), GrayImage(width, height)}, Plane<float>(width, height, -1.0f)};
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      scene.pair.left.at(u, v) = base.at(u + widest - shifts[v], v);
      scene.pair.right.at(u, v) = base.at(u + widest, v);
      if (u >= shifts[v]) scene.truth.at(u, v) = static_cast<float>(disparity(v));
    }
  }
  return scene;
}

Scene constant_shift(int width, int height, int shift, std::uint64_t seed) {
  return row_shift(width, height, [shift](int) { return double(shift); }, seed);
}

GroundTruth to_ground_truth(const Plane<float>& truth) {
  GroundTruth gt{Plane<std::uint16_t>(truth.width(), truth.height(), 0)};
  for (int v = 0; v < truth.height(); ++v) {
    for (int u = 0; u < truth.width(); ++u) {
      const float d = truth.at(u, v);
      if (d >= 0) gt.raw.at(u, v) = static_cast<std::uint16_t>(std::lround(d * 256.0));
    }
  }
  return gt;
}

}  // namespace streamelas::synthetic
