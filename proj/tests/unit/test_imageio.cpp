#include <gtest/gtest.h>

#include <unistd.h>

#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>

#include "streamelas/imageio.hpp"
#include "streamelas/synthetic.hpp"

using namespace streamelas;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("streamelas_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Pgm, ReadsBytesVerbatim) {
  TempDir dir;
  write_bytes(dir / "a.pgm", std::string("P5\n2 2 255\n") + std::string("\x00\x01\x02\x03", 4));
  const GrayImage img = imageio::load_pgm(dir / "a.pgm");
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img.at(0, 0), 0);
  EXPECT_EQ(img.at(1, 0), 1);
  EXPECT_EQ(img.at(0, 1), 2);
  EXPECT_EQ(img.at(1, 1), 3);
}

TEST(Pgm, HeaderCommentsAndSmallMaxval) {
  TempDir dir;
  write_bytes(dir / "c.pgm", std::string("P5\n# made by hand\n3 1\n# another\n15\n") + std::string("\x05\x0f\x00", 3));
  const GrayImage img = imageio::load_pgm(dir / "c.pgm");
  EXPECT_EQ(img.at(1, 0), 15);  // no rescaling
}

TEST(Pgm, Errors) {
  TempDir dir;
  write_bytes(dir / "deep.pgm", std::string("P5\n2 2 65535\n") + std::string(8, '\0'));
  write_bytes(dir / "empty.pgm", "");
  write_bytes(dir / "short.pgm", std::string("P5\n4 4 255\n") + std::string(10, '\0'));
  write_bytes(dir / "ascii.pgm", "P2\n2 2 255\n0 1 2 3\n");
  write_bytes(dir / "junk.pgm", "P5\nfoo 2 255\n");
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "deep.pgm"); }), ErrorCode::UnsupportedDepth);
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "empty.pgm"); }), ErrorCode::Truncated);
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "short.pgm"); }), ErrorCode::Truncated);
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "ascii.pgm"); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "junk.pgm"); }), ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([&] { imageio::load_pgm(dir / "missing.pgm"); }), ErrorCode::IoError);
}

TEST(Pgm, RoundTripIsIdentity) {
  TempDir dir;
  const GrayImage img = synthetic::random_texture(37, 23, 4);
  imageio::save_pgm(img, dir / "r.pgm");
  EXPECT_EQ(imageio::load_pgm(dir / "r.pgm"), img);
  EXPECT_EQ(imageio::load_gray(dir / "r.pgm"), img);
}

TEST(Png, GroundTruthFixedPoint) {
  TempDir dir;
  Plane<std::uint16_t> raw(3, 1);
  raw.at(0, 0) = 2560;
  raw.at(1, 0) = 0;
  raw.at(2, 0) = 65535;
  imageio::save_png16(raw, dir / "gt.png");
  const GroundTruth gt = imageio::load_gt_png16(dir / "gt.png");
  EXPECT_EQ(gt.raw, raw);
  EXPECT_DOUBLE_EQ(gt.disparity(0, 0), 10.0);
  EXPECT_FALSE(gt.has(1, 0));
  EXPECT_TRUE(gt.has(2, 0));
}

// 2x2 8-bit gray PNG, every pixel 7.
const std::string kGray8Png(
    "\x89\x50\x4e\x47\x0d\x0a\x1a\x0a\x00\x00\x00\x0d\x49\x48\x44\x52\x00\x00\x00\x02\x00\x00\x00\x02"
    "\x08\x00\x00\x00\x00\x57\xdd\x52\xf8\x00\x00\x00\x0e\x49\x44\x41\x54\x78\x9c\x63\x64\x67\x60\x62"
    "\x60\x00\x00\x00\x35\x00\x0b\xa4\x5a\x44\xbb\x00\x00\x00\x00\x49\x45\x4e\x44\xae\x42\x60\x82",
    71);
// 2x1 8-bit RGB PNG, both pixels pure red.
const std::string kRgbPng(
    "\x89\x50\x4e\x47\x0d\x0a\x1a\x0a\x00\x00\x00\x0d\x49\x48\x44\x52\x00\x00\x00\x02\x00\x00\x00\x01"
    "\x08\x02\x00\x00\x00\x7b\x40\xe8\xdd\x00\x00\x00\x0f\x49\x44\x41\x54\x78\x9c\x63\xfc\xcf\xc0\xc0"
    "\xc0\xc0\x00\x00\x06\x08\x01\x01\xcb\x47\x76\x75\x00\x00\x00\x00\x49\x45\x4e\x44\xae\x42\x60\x82",
    72);

TEST(Png, EightBitGroundTruthIsFormatError) {
  TempDir dir;
  write_bytes(dir / "g8.png", kGray8Png);
  write_bytes(dir / "not.png", "definitely not a png");
  write_bytes(dir / "rgb.png", kRgbPng);
  EXPECT_EQ(code_of([&] { imageio::load_gt_png16(dir / "g8.png"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([&] { imageio::load_gt_png16(dir / "not.png"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([&] { imageio::load_gt_png16(dir / "rgb.png"); }), ErrorCode::FormatError);

  const GrayImage g = imageio::load_png8(dir / "g8.png");
  EXPECT_EQ(g, GrayImage(2, 2, std::uint8_t{7}));
  Plane<std::uint16_t> wide(5, 5);
  imageio::save_png16(wide, dir / "wide.png");
  EXPECT_EQ(code_of([&] { imageio::load_png8(dir / "wide.png"); }), ErrorCode::FormatError);
}

TEST(Png, ColourInputConvertedToLuma) {
  TempDir dir;
  write_bytes(dir / "rgb.png", kRgbPng);
  const GrayImage g = imageio::load_gray(dir / "rgb.png");
  ASSERT_EQ(g.width(), 2);
  ASSERT_EQ(g.height(), 1);
  EXPECT_NEAR(g.at(0, 0), 54, 2);  // Rec. 709 red weight 0.2126
  EXPECT_EQ(g.at(0, 0), g.at(1, 0));
}

TEST(Disparity, Pgm8ScaledPng16AndPfm) {
  TempDir dir;
  DisparityMap m(2, 1);
  m.at(0, 0) = 10;
  m.at(1, 0) = kInvalidDisparity;

  imageio::save_disparity(m, dir / "d.pgm", imageio::DisparityFormat::Pgm8Scaled, 64);
  const GrayImage pgm = imageio::load_pgm(dir / "d.pgm");
  EXPECT_EQ(pgm.at(0, 0), 40);
  EXPECT_EQ(pgm.at(1, 0), 0);

  imageio::save_disparity(m, dir / "d.png", imageio::DisparityFormat::Png16Kitti, 64);
  const GroundTruth png = imageio::load_gt_png16(dir / "d.png");
  EXPECT_EQ(png.raw.at(0, 0), 2560);
  EXPECT_EQ(png.raw.at(1, 0), 0);

  imageio::save_disparity(m, dir / "d.pfm", imageio::DisparityFormat::Pfm, 64);
  const Plane<float> pfm = imageio::load_pfm(dir / "d.pfm");
  EXPECT_EQ(pfm.at(0, 0), 10.0f);
  EXPECT_EQ(pfm.at(1, 0), -1.0f);
}

TEST(Disparity, PfmHeaderAndRowOrder) {
  TempDir dir;
  Plane<float> p(2, 2);
  p.at(0, 0) = 1;
  p.at(1, 0) = 2;
  p.at(0, 1) = 3;
  p.at(1, 1) = 4;
  imageio::save_pfm(p, dir / "p.pfm");
  std::ifstream in(dir / "p.pfm", std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(all.rfind("Pf\n2 2\n-1", 0), 0u);
  float last_row_first;
  std::memcpy(&last_row_first, all.data() + all.size() - 16, 4);
  EXPECT_EQ(last_row_first, 3.0f);  // bottom row is stored first
  EXPECT_EQ(imageio::load_pfm(dir / "p.pfm"), p);
}

TEST(Disparity, Png16RoundTripRecoversValidValues) {
  TempDir dir;
  std::mt19937 rng(3);
  DisparityMap m(31, 17);
  for (auto& d : m.pixels()) d = rng() % 5 == 0 ? kInvalidDisparity : static_cast<std::uint16_t>(rng() % 256);
  imageio::save_disparity(m, dir / "m.png", imageio::DisparityFormat::Png16Kitti, 256);
  const GroundTruth gt = imageio::load_gt_png16(dir / "m.png");
  for (int v = 0; v < 17; ++v) {
    for (int u = 0; u < 31; ++u) {
      if (m.at(u, v) == kInvalidDisparity || m.at(u, v) == 0) continue;
      EXPECT_EQ(gt.disparity(u, v), m.at(u, v));
    }
  }
}

TEST(Disparity, FormatNames) {
  EXPECT_EQ(imageio::parse_disparity_format("png16-kitti"), imageio::DisparityFormat::Png16Kitti);
  EXPECT_EQ(imageio::format_from_extension("x.pfm"), imageio::DisparityFormat::Pfm);
  EXPECT_THROW(imageio::parse_disparity_format("tiff"), Error);
}

TEST(Disparity, UnwritablePathIsWriteError) {
  DisparityMap m(2, 2);
  EXPECT_EQ(code_of([&] {
              imageio::save_disparity(m, "/nonexistent-dir/x.png", imageio::DisparityFormat::Png16Kitti, 64);
            }),
            ErrorCode::WriteError);
}
