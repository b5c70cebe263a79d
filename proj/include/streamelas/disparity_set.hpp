#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>

namespace streamelas {

/// Fixed-width candidate bitmask for disparities 0..255 (bit d set means d
/// is a candidate). This is the one-hot encoded grid vector handed to dense
/// matching.
class DisparitySet {
 public:
  static constexpr int kCapacity = 256;

  void insert(int d) noexcept { words_[d >> 6] |= std::uint64_t{1} << (d & 63); }
  bool contains(int d) const noexcept { return (words_[d >> 6] >> (d & 63)) & 1u; }

  /// Inserts {d-1, d, d+1} clipped to [0, range-1].
  void insert_with_neighbors(int d, int range) noexcept {
    for (int x = d - 1; x <= d + 1; ++x) {
      if (x >= 0 && x < range) insert(x);
    }
  }

  void insert_all(int range) noexcept {
    for (int d = 0; d < range; ++d) insert(d);
  }

  DisparitySet& operator|=(const DisparitySet& o) noexcept {
    for (int i = 0; i < 4; ++i) words_[i] |= o.words_[i];
    return *this;
  }

  bool empty() const noexcept { return (words_[0] | words_[1] | words_[2] | words_[3]) == 0; }
  int size() const noexcept {
    return std::popcount(words_[0]) + std::popcount(words_[1]) + std::popcount(words_[2]) +
           std::popcount(words_[3]);
  }

  /// Calls f(d) for each member in increasing order.
  template <typename F>
  void for_each(F&& f) const {
    for (int w = 0; w < 4; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
  }

  /// Hex string of the low `range` bits, most significant digit first.
  std::string to_hex(int range) const;

  const std::array<std::uint64_t, 4>& words() const noexcept { return words_; }

  friend bool operator==(const DisparitySet&, const DisparitySet&) = default;

 private:
  std::array<std::uint64_t, 4> words_{};
};

}  // namespace streamelas
