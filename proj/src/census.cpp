#include "streamelas/census.hpp"

#include <string>

namespace streamelas::census {

void CensusConfig::validate() const {
  if (window < 3 || window > 13 || window % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig,
                "census window must be odd and in [3, 13], got " + std::to_string(window));
  }
}

CensusField::CensusField(int width, int height, CensusConfig cfg)
    : cfg_(cfg), descriptors_(width, height) {}

CensusField census_transform(const GrayImage& img, CensusConfig cfg, const simd::Kernels& kernels) {
  cfg.validate();
  if (img.width() < cfg.window || img.height() < cfg.window) {
    throw Error(ErrorCode::InputTooSmall, std::to_string(img.width()) + "x" +
                                              std::to_string(img.height()) + " image is smaller than a " +
                                              std::to_string(cfg.window) + "x" +
                                              std::to_string(cfg.window) + " window");
  }
  CensusField field(img.width(), img.height(), cfg);
  for (int v = 0; v < img.height(); ++v) {
    kernels.census_row(img.data(), img.width(), img.height(), v, cfg.window, field.row(v));
  }
  return field;
}

}  // namespace streamelas::census
