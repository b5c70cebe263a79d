#include "streamelas/simd/kernels.hpp"

namespace streamelas::simd::scalar {

void census_row(const std::uint8_t* image, int width, int height, int v, int window,
                Descriptor* out) {
  const int r = window / 2;
  const int bits = window * window - 1;
  for (int u = 0; u < width; ++u) out[u] = Descriptor{};
  if (v < r || v >= height - r) return;
  for (int u = r; u < width - r; ++u) {
    const std::uint8_t center = image[static_cast<std::size_t>(v) * width + u];
    Descriptor d;
    int k = 0;
    for (int dy = -r; dy <= r; ++dy) {
      const std::uint8_t* row = image + static_cast<std::size_t>(v + dy) * width + u;
      for (int dx = -r; dx <= r; ++dx) {
        if (dy == 0 && dx == 0) continue;
        if (row[dx] < center) d.set_bit(bits - 1 - k);
        ++k;
      }
    }
    out[u] = d;
  }
}

void hamming_costs(const Descriptor& ref, const Descriptor* base, std::ptrdiff_t stride, int count,
                   std::uint16_t* out) {
  for (int i = 0; i < count; ++i) {
    out[i] = static_cast<std::uint16_t>(hamming(ref, base[i * stride]));
  }
}

}  // namespace streamelas::simd::scalar
