#include "streamelas/disparity_set.hpp"

namespace streamelas {

std::string DisparitySet::to_hex(int range) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int digits = (range + 3) / 4;
  std::string out(digits, '0');
  for (int i = 0; i < digits; ++i) {
    int nibble = 0;
    for (int b = 0; b < 4; ++b) {
      const int d = 4 * i + b;
      if (d < range && contains(d)) nibble |= 1 << b;
    }
    out[digits - 1 - i] = kDigits[nibble];
  }
  return out;
}

}  // namespace streamelas
