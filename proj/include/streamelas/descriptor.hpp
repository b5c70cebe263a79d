#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace streamelas {

/// Census bit string of up to 256 bits, viewed as one unsigned integer:
/// bit i lives in words[i / 64] at position i % 64. The first window
/// neighbour in row-major order occupies the most significant used bit.
/// 32-byte alignment lets the AVX2 kernels load a descriptor as one register.
struct alignas(32) Descriptor {
  std::array<std::uint64_t, 4> words{};

  bool bit(int i) const noexcept { return (words[i >> 6] >> (i & 63)) & 1u; }
  void set_bit(int i) noexcept { words[i >> 6] |= std::uint64_t{1} << (i & 63); }

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

inline int hamming(const Descriptor& a, const Descriptor& b) noexcept {
  return std::popcount(a.words[0] ^ b.words[0]) + std::popcount(a.words[1] ^ b.words[1]) +
         std::popcount(a.words[2] ^ b.words[2]) + std::popcount(a.words[3] ^ b.words[3]);
}

}  // namespace streamelas
