#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "streamelas/descriptor.hpp"

namespace streamelas::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);
Isa parse_isa(std::string_view name);  // "auto", "scalar", "avx2"

/// Census descriptors for one image row. Writes width entries to `out`;
/// pixels closer than window/2 to any border get the zero descriptor.
/// `image` is row-major with `width` bytes per row.
using CensusRowFn = void (*)(const std::uint8_t* image, int width, int height, int v,
                             int window, Descriptor* out);

/// out[i] = hamming(ref, base[i * stride]) for i in [0, count).
/// stride is -1 for left-to-right disparity scans and +1 for the reverse check.
using HammingCostsFn = void (*)(const Descriptor& ref, const Descriptor* base,
                                std::ptrdiff_t stride, int count, std::uint16_t* out);

struct Kernels {
  Isa isa;
  CensusRowFn census_row;
  HammingCostsFn hamming_costs;
};

bool cpu_supports(Isa isa);

/// Best ISA the running CPU supports, overridable with STREAMELAS_ISA=scalar.
Isa detect_isa();

/// Throws InvalidConfig when the CPU lacks the requested ISA.
const Kernels& kernels_for(Isa isa);
const Kernels& default_kernels();

namespace scalar {
void census_row(const std::uint8_t* image, int width, int height, int v, int window, Descriptor* out);
void hamming_costs(const Descriptor& ref, const Descriptor* base, std::ptrdiff_t stride, int count,
                   std::uint16_t* out);
}  // namespace scalar

#if STREAMELAS_HAVE_AVX2
namespace avx2 {
void census_row(const std::uint8_t* image, int width, int height, int v, int window, Descriptor* out);
void hamming_costs(const Descriptor& ref, const Descriptor* base, std::ptrdiff_t stride, int count,
                   std::uint16_t* out);
}  // namespace avx2
#endif

}  // namespace streamelas::simd
