#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "streamelas/pipeline.hpp"

namespace streamelas::eval {

/// KITTI outlier rule: off by at least 3 levels and by at least 5 % of the truth.
inline bool is_bad_pixel(double estimate, double truth) noexcept {
  const double err = estimate > truth ? estimate - truth : truth - estimate;
  return err >= 3.0 && err >= 0.05 * truth;
}

struct ErrorRates {
  std::int64_t gt_valid = 0;       ///< pixels with ground truth
  std::int64_t both_valid = 0;     ///< ground truth and an estimate
  std::int64_t bad_both_valid = 0;
  std::int64_t bad_all = 0;        ///< bad_both_valid plus missing estimates
  std::int64_t estimated = 0;      ///< valid estimates anywhere in the frame
  std::int64_t pixels = 0;

  /// Outlier fraction over pixels that have both GT and an estimate.
  double rate() const noexcept { return both_valid ? double(bad_both_valid) / double(both_valid) : 0.0; }
  /// Outlier fraction over all GT pixels, counting missing estimates as bad.
  double rate_all() const noexcept { return gt_valid ? double(bad_all) / double(gt_valid) : 0.0; }
  double density() const noexcept { return pixels ? double(estimated) / double(pixels) : 0.0; }
};

/// Throws ShapeError when the maps differ in size.
ErrorRates kitti_error(const DisparityMap& estimate, const GroundTruth& gt);

struct DatasetEntry {
  std::string name;
  std::filesystem::path left;
  std::filesystem::path right;
  std::optional<std::filesystem::path> gt;
};

/// Finds stereo pairs under `dir`: image_0/image_1, image_2/image_3 or
/// left/right subfolders, matched by file name. Ground truth is looked up by
/// the same name in `gt_dir`, or else in disp_noc_0, disp_noc or disp_occ_0
/// next to the images. Entries are sorted by name.
std::vector<DatasetEntry> discover_dataset(const std::filesystem::path& dir,
                                           const std::optional<std::filesystem::path>& gt_dir = {});

struct ImageResult {
  std::string name;
  bool ok = false;
  std::string error;  ///< set when !ok
  std::optional<ErrorRates> rates;
  std::size_t support_points = 0;
  double ms = 0;  ///< pipeline wall time
  std::vector<std::pair<std::string, double>> timings_ms;
};

struct EvalResult {
  std::vector<ImageResult> images;  ///< same order as the input entries
  int evaluated = 0;                ///< images with ground truth that ran
  int failed = 0;
  double mean_error = 0;      ///< mean per-image rate(), percent
  double mean_error_all = 0;  ///< mean per-image rate_all(), percent
  double mean_density = 0;
  double mean_ms = 0;
};

using Logger = std::function<void(const std::string&)>;

/// Runs the pipeline on every entry, `threads` images at a time. Per-image
/// failures are recorded and logged; the rest still run. Aggregates do not
/// depend on the thread count.
EvalResult evaluate(const std::vector<DatasetEntry>& entries, const PipelineConfig& cfg,
                    int threads = 1, const Logger& log = {});

struct SweepRow {
  int sparse_window = 0;
  int dense_window = 0;
  int downsample = 0;
  double error_pct = 0;
  double error_all_pct = 0;
  double density = 0;
  double ms_per_frame = 0;
  int images = 0;
};

struct SweepGrid {
  std::vector<int> sparse_windows{7, 9, 11, 13};
  std::vector<int> dense_windows{3, 5, 7};
  std::vector<int> downsample{1, 8, 32};
};

/// One row per (sparse window, dense window, downsample) combination, in
/// that nesting order. Combinations with dense window > sparse window are kept.
std::vector<SweepRow> sweep(const std::vector<DatasetEntry>& entries, const PipelineConfig& base,
                            const SweepGrid& grid, int threads = 1, const Logger& log = {});

/// CSV with header. Timing is the only non-deterministic column and can be left out.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_timing = true);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace streamelas::eval
