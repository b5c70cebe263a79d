#pragma once

#include <filesystem>

#include "streamelas/image.hpp"

namespace streamelas::imageio {

enum class DisparityFormat {
  Pgm8Scaled,  ///< P5, round(d * 255 / (D - 1)), invalid -> 0
  Png16Kitti,  ///< 16-bit gray PNG, d * 256, invalid -> 0
  Pfm,         ///< little-endian float32 ("Pf", scale -1.0), bottom row first, invalid -> -1
};

/// Binary PGM (P5) with maxval <= 255. Pixel bytes are returned unscaled.
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

/// 8-bit PNG. Colour images are converted to luma on load (KITTI image_2/image_3).
GrayImage load_png8(const std::filesystem::path& path);

/// Dispatches on the extension (.pgm or .png).
GrayImage load_gray(const std::filesystem::path& path);

GroundTruth load_gt_png16(const std::filesystem::path& path);
void save_png16(const Plane<std::uint16_t>& image, const std::filesystem::path& path);

void save_disparity(const DisparityMap& map, const std::filesystem::path& path,
                    DisparityFormat format, int disparity_range);

void save_pfm(const Plane<float>& image, const std::filesystem::path& path);
Plane<float> load_pfm(const std::filesystem::path& path);

DisparityFormat parse_disparity_format(std::string_view name);
DisparityFormat format_from_extension(const std::filesystem::path& path);

}  // namespace streamelas::imageio
