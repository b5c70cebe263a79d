// AVX2 variants of the census and Hamming-cost kernels. Functions carry a
// target attribute instead of the whole file being built with -mavx2 so no
// AVX2 code can leak into inline functions shared with the scalar build.
#include "streamelas/simd/kernels.hpp"

#if STREAMELAS_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>

#define STREAMELAS_AVX2 __attribute__((target("avx2,popcnt")))

namespace streamelas::simd::avx2 {
namespace {

// Places the low `len` bits of `chunk` so that its least significant bit
// lands at descriptor bit `pos`.
inline void place_bits(Descriptor& d, std::uint32_t chunk, int pos, int len) {
  if (chunk == 0) return;
  const int word = pos >> 6;
  const int shift = pos & 63;
  d.words[word] |= static_cast<std::uint64_t>(chunk) << shift;
  if (shift + len > 64) {
    d.words[word + 1] |= static_cast<std::uint64_t>(chunk) >> (64 - shift);
  }
}

Descriptor census_pixel(const std::uint8_t* image, int width, int u, int v, int r, int bits) {
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
  return d;
}

// Removes bit `at` from a chunk, closing the gap.
inline std::uint32_t drop_bit(std::uint32_t chunk, int at) {
  const std::uint32_t low = chunk & ((1u << at) - 1u);
  return ((chunk >> (at + 1)) << at) | low;
}

STREAMELAS_AVX2 inline __m256i lane_popcounts(__m256i a, const Descriptor& b) {
  const __m256i nibble_lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                              0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i x = _mm256_xor_si256(a, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.words.data())));
  const __m256i lo = _mm256_shuffle_epi8(nibble_lut, _mm256_and_si256(x, low_mask));
  const __m256i hi = _mm256_shuffle_epi8(nibble_lut, _mm256_and_si256(_mm256_srli_epi16(x, 4), low_mask));
  // Per 64-bit lane sum of byte counts, at most 64.
  return _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256());
}

}  // namespace

// Two window rows share one 256-bit register (one per 128-bit lane). Bytes are
// reversed inside each lane so that movemask yields the leftmost window
// column in the most significant position of each row chunk.
STREAMELAS_AVX2 void census_row(const std::uint8_t* image, int width, int height, int v,
                                int window, Descriptor* out) {
  const int r = window / 2;
  const int bits = window * window - 1;
  for (int u = 0; u < width; ++u) out[u] = Descriptor{};
  if (v < r || v >= height - r) return;

  const __m256i reverse = _mm256_setr_epi8(15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0,
                                           15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0);
  const std::uint32_t row_mask = (1u << window) - 1u;
  const int drop_shift = 16 - window;

  // The 16-byte loads start at u - r, so they stay inside every row while
  // u - r + 16 <= width. Remaining pixels go through the scalar kernel.
  const int simd_end = std::min(width - r, width - 16 + r + 1);
  int u = r;
  for (; u < simd_end; ++u) {
    const std::uint8_t* column0 = image + static_cast<std::size_t>(v - r) * width + (u - r);
    const __m256i center = _mm256_set1_epi8(static_cast<char>(image[static_cast<std::size_t>(v) * width + u]));
    Descriptor d;
    int pos = bits;  // bit index one past the next chunk's top bit
    for (int dy = 0; dy < window; dy += 2) {
      const __m128i lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(column0 + static_cast<std::size_t>(dy) * width));
      const __m128i hi = dy + 1 < window
                             ? _mm_loadu_si128(reinterpret_cast<const __m128i*>(column0 + static_cast<std::size_t>(dy + 1) * width))
                             : lo;
      __m256i rows = _mm256_set_m128i(hi, lo);
      rows = _mm256_shuffle_epi8(rows, reverse);
      // q >= center  <=>  max(q, center) == q
      const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(rows, center), rows);
      const std::uint32_t lt = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(ge));
      for (int half = 0; half < 2 && dy + half < window; ++half) {
        std::uint32_t chunk = ((lt >> (16 * half)) & 0xffffu) >> drop_shift;
        chunk &= row_mask;
        int len = window;
        if (dy + half == r) {
          chunk = drop_bit(chunk, r);
          len = window - 1;
        }
        pos -= len;
        place_bits(d, chunk, pos, len);
      }
    }
    out[u] = d;
  }
  for (; u < width - r; ++u) out[u] = census_pixel(image, width, u, v, r, bits);
}

STREAMELAS_AVX2 void hamming_costs(const Descriptor& ref, const Descriptor* base,
                                   std::ptrdiff_t stride, int count, std::uint16_t* out) {
  const __m256i a = _mm256_load_si256(reinterpret_cast<const __m256i*>(ref.words.data()));

  int i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i s0 = lane_popcounts(a, base[(i + 0) * stride]);
    const __m256i s1 = lane_popcounts(a, base[(i + 1) * stride]);
    const __m256i s2 = lane_popcounts(a, base[(i + 2) * stride]);
    const __m256i s3 = lane_popcounts(a, base[(i + 3) * stride]);
    // Pack four descriptors' lane sums into 16-bit fields, then fold lanes.
    __m256i packed = _mm256_or_si256(_mm256_or_si256(s0, _mm256_slli_epi64(s1, 16)),
                                     _mm256_or_si256(_mm256_slli_epi64(s2, 32), _mm256_slli_epi64(s3, 48)));
    const __m128i folded = _mm_add_epi16(_mm256_castsi256_si128(packed), _mm256_extracti128_si256(packed, 1));
    const __m128i total = _mm_add_epi16(folded, _mm_unpackhi_epi64(folded, folded));
    _mm_storel_epi64(reinterpret_cast<__m128i*>(out + i), total);
  }
  for (; i < count; ++i) {
    const Descriptor& b = base[i * stride];
    out[i] = static_cast<std::uint16_t>(
        _mm_popcnt_u64(ref.words[0] ^ b.words[0]) + _mm_popcnt_u64(ref.words[1] ^ b.words[1]) +
        _mm_popcnt_u64(ref.words[2] ^ b.words[2]) + _mm_popcnt_u64(ref.words[3] ^ b.words[3]));
  }
}

}  // namespace streamelas::simd::avx2

#endif  // STREAMELAS_HAVE_AVX2
