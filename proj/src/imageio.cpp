#include "streamelas/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

namespace streamelas::imageio {
namespace {

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads one whitespace-delimited header token, skipping '#' comments.
class HeaderCursor {
 public:
  HeaderCursor(const std::vector<char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      out.push_back(bytes_[pos_++]);
    }
    if (out.empty()) {
      throw Error(ErrorCode::Truncated, "header ends early in " + path_.string());
    }
    return out;
  }

  long number() {
    std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorCode::MalformedHeader, "expected integer, got '" + t + "' in " + path_.string());
    }
    if (t.size() > 9) {
      throw Error(ErrorCode::MalformedHeader, "header value out of range in " + path_.string());
    }
    return std::stol(t);
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size()) {
      throw Error(ErrorCode::Truncated, "missing payload in " + path_.string());
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

void write_file(const std::filesystem::path& path, const std::string& header,
                const void* payload, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::WriteError, "cannot open " + path.string() + " for writing");
  }
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
  if (!out) {
    throw Error(ErrorCode::WriteError, "short write to " + path.string());
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngRead {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint8_t> bytes;  // raw rows, big-endian samples for 16 bit
};

PngRead read_png(const std::filesystem::path& path, bool convert_color) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  png_byte sig[8] = {};
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::FormatError, "not a PNG file: " + path.string());
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  PngRead result;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::FormatError, "corrupt PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  result.width = static_cast<int>(png_get_image_width(png, info));
  result.height = static_cast<int>(png_get_image_height(png, info));
  result.bit_depth = png_get_bit_depth(png, info);
  result.color_type = png_get_color_type(png, info);
  const bool color = (result.color_type & PNG_COLOR_MASK_COLOR) != 0;
  if (convert_color && result.bit_depth == 8 && result.color_type != PNG_COLOR_TYPE_PALETTE) {
    if (color) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (result.color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    result.color_type = png_get_color_type(png, info);
  }
  if (result.color_type != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::FormatError, "expected single-channel gray PNG: " + path.string());
  }
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  result.bytes.resize(row_bytes * result.height);
  rows.resize(result.height);
  for (int y = 0; y < result.height; ++y) rows[y] = result.bytes.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return result;
}

void write_png(const std::filesystem::path& path, int width, int height, int bit_depth,
               std::vector<std::uint8_t>& bytes) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw Error(ErrorCode::WriteError, "cannot open " + path.string() + " for writing");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::WriteError, "libpng initialisation failed");
  }
  std::vector<png_bytep> rows(height);
  const std::size_t row_bytes = static_cast<std::size_t>(width) * (bit_depth / 8);
  for (int y = 0; y < height; ++y) rows[y] = bytes.data() + y * row_bytes;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::WriteError, "PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::ferror(file.get())) {
    throw Error(ErrorCode::WriteError, "short write to " + path.string());
  }
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  const std::vector<char> bytes = read_file(path);
  if (bytes.empty()) {
    throw Error(ErrorCode::Truncated, "empty file " + path.string());
  }
  HeaderCursor header(bytes, path);
  if (header.token() != "P5") {
    throw Error(ErrorCode::MalformedHeader, "not a binary PGM (P5): " + path.string());
  }
  const long width = header.number();
  const long height = header.number();
  const long maxval = header.number();
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::MalformedHeader, "non-positive dimensions in " + path.string());
  }
  if (maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::UnsupportedDepth,
                "maxval " + std::to_string(maxval) + " not supported in " + path.string());
  }
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + count) {
    throw Error(ErrorCode::Truncated, "payload shorter than " + std::to_string(count) +
                                          " bytes in " + path.string());
  }
  std::vector<std::uint8_t> data(count);
  std::memcpy(data.data(), bytes.data() + offset, count);
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ostringstream header;
  header << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  write_file(path, header.str(), image.data(), image.size());
}

GrayImage load_png8(const std::filesystem::path& path) {
  PngRead png = read_png(path, true);
  if (png.bit_depth != 8) {
    throw Error(ErrorCode::FormatError, "expected 8-bit PNG, got " +
                                            std::to_string(png.bit_depth) + "-bit: " + path.string());
  }
  return GrayImage(png.width, png.height, std::move(png.bytes));
}

GrayImage load_gray(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return load_png8(path);
  return load_pgm(path);
}

GroundTruth load_gt_png16(const std::filesystem::path& path) {
  PngRead png = read_png(path, false);
  if (png.bit_depth != 16) {
    throw Error(ErrorCode::FormatError, "expected 16-bit PNG, got " +
                                            std::to_string(png.bit_depth) + "-bit: " + path.string());
  }
  std::vector<std::uint16_t> values(static_cast<std::size_t>(png.width) * png.height);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<std::uint16_t>((png.bytes[2 * i] << 8) | png.bytes[2 * i + 1]);
  }
  return GroundTruth{Plane<std::uint16_t>(png.width, png.height, std::move(values))};
}

void save_png16(const Plane<std::uint16_t>& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(image.size() * 2);
  const auto px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(px[i] >> 8);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(px[i] & 0xff);
  }
  write_png(path, image.width(), image.height(), 16, bytes);
}

void save_pfm(const Plane<float>& image, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "PFM writer assumes little-endian host");
  std::ostringstream header;
  header << "Pf\n" << image.width() << ' ' << image.height() << "\n-1.0\n";
  std::vector<float> flipped(image.size());
  for (int v = 0; v < image.height(); ++v) {
    auto src = image.row(image.height() - 1 - v);
    std::copy(src.begin(), src.end(), flipped.begin() + static_cast<std::ptrdiff_t>(v) * image.width());
  }
  write_file(path, header.str(), flipped.data(), flipped.size() * sizeof(float));
}

Plane<float> load_pfm(const std::filesystem::path& path) {
  const std::vector<char> bytes = read_file(path);
  if (bytes.empty()) {
    throw Error(ErrorCode::Truncated, "empty file " + path.string());
  }
  HeaderCursor header(bytes, path);
  if (header.token() != "Pf") {
    throw Error(ErrorCode::MalformedHeader, "not a single-channel PFM: " + path.string());
  }
  const long width = header.number();
  const long height = header.number();
  const std::string scale = header.token();
  if (scale.empty() || scale[0] != '-') {
    throw Error(ErrorCode::FormatError, "only little-endian PFM supported: " + path.string());
  }
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() < offset + count * sizeof(float)) {
    throw Error(ErrorCode::Truncated, "PFM payload too short: " + path.string());
  }
  Plane<float> out(static_cast<int>(width), static_cast<int>(height));
  for (long v = 0; v < height; ++v) {
    std::memcpy(out.row(static_cast<int>(height - 1 - v)).data(),
                bytes.data() + offset + v * width * sizeof(float), width * sizeof(float));
  }
  return out;
}

void save_disparity(const DisparityMap& map, const std::filesystem::path& path,
                    DisparityFormat format, int disparity_range) {
  switch (format) {
    case DisparityFormat::Png16Kitti: {
      Plane<std::uint16_t> out(map.width(), map.height());
      for (std::size_t i = 0; i < map.size(); ++i) {
        const std::uint16_t d = map.pixels()[i];
        out.pixels()[i] = d == kInvalidDisparity ? 0 : static_cast<std::uint16_t>(d * 256);
      }
      save_png16(out, path);
      return;
    }
    case DisparityFormat::Pgm8Scaled: {
      if (disparity_range < 2) {
        throw Error(ErrorCode::InvalidConfig, "disparity range must be >= 2 for pgm8 scaling");
      }
      GrayImage out(map.width(), map.height());
      const double scale = 255.0 / (disparity_range - 1);
      for (std::size_t i = 0; i < map.size(); ++i) {
        const std::uint16_t d = map.pixels()[i];
        out.pixels()[i] = d == kInvalidDisparity
                              ? 0
                              : static_cast<std::uint8_t>(std::min(255.0, std::floor(d * scale + 0.5)));
      }
      save_pgm(out, path);
      return;
    }
    case DisparityFormat::Pfm: {
      Plane<float> out(map.width(), map.height());
      for (std::size_t i = 0; i < map.size(); ++i) {
        const std::uint16_t d = map.pixels()[i];
        out.pixels()[i] = d == kInvalidDisparity ? -1.0f : static_cast<float>(d);
      }
      save_pfm(out, path);
      return;
    }
  }
}

DisparityFormat parse_disparity_format(std::string_view name) {
  if (name == "pgm8-scaled" || name == "pgm") return DisparityFormat::Pgm8Scaled;
  if (name == "png16-kitti" || name == "png") return DisparityFormat::Png16Kitti;
  if (name == "pfm") return DisparityFormat::Pfm;
  throw Error(ErrorCode::InvalidConfig, "unknown disparity format '" + std::string(name) + "'");
}

DisparityFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return DisparityFormat::Png16Kitti;
  if (ext == ".pfm") return DisparityFormat::Pfm;
  if (ext == ".pgm") return DisparityFormat::Pgm8Scaled;
  throw Error(ErrorCode::InvalidConfig, "cannot infer disparity format from '" + path.string() + "'");
}

}  // namespace streamelas::imageio
