#include <cstdlib>
#include <string>

#include "streamelas/error.hpp"
#include "streamelas/simd/kernels.hpp"

namespace streamelas::simd {
namespace {

constexpr Kernels kScalar{Isa::Scalar, &scalar::census_row, &scalar::hamming_costs};
#if STREAMELAS_HAVE_AVX2
constexpr Kernels kAvx2{Isa::Avx2, &avx2::census_row, &avx2::hamming_costs};
#endif

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "auto") return detect_isa();
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  throw Error(ErrorCode::InvalidConfig, "unknown isa '" + std::string(name) + "'");
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if STREAMELAS_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() {
  if (const char* forced = std::getenv("STREAMELAS_ISA"); forced && std::string_view(forced) == "scalar") {
    return Isa::Scalar;
  }
  return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

const Kernels& kernels_for(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error(ErrorCode::InvalidConfig, "CPU does not support " + std::string(to_string(isa)));
  }
#if STREAMELAS_HAVE_AVX2
  if (isa == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

const Kernels& default_kernels() {
  static const Kernels& selected = kernels_for(detect_isa());
  return selected;
}

}  // namespace streamelas::simd
