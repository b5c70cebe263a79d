#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streamelas/config.hpp"

namespace streamelas {

struct StereoPair {
  GrayImage left;
  GrayImage right;
};

/// Intermediate results at every stage boundary, captured on request so the
/// two executors can be compared tap by tap.
struct PipelineTaps {
  census::CensusField sparse_left;
  census::CensusField sparse_right;
  census::CensusField dense_left;
  census::CensusField dense_right;
  std::vector<sparse::SupportPoint> candidates;  ///< after matching and downsampling
  std::vector<sparse::SupportPoint> filtered;
  prior::Triangulation mesh;
  prior::PriorField prior;
  DisparityMap raw;  ///< dense output before the median filter
};

/// Step accounting for one streaming stage.
struct StageStats {
  std::string stage;
  std::int64_t fill_latency_steps = 0;  ///< first input to first output
  std::int64_t active_steps = 0;        ///< first input to last output, inclusive
  std::int64_t outputs = 0;
  int peak_resident_rows = 0;  ///< image rows held by line buffers, 0 when none
};

struct PipelineResult {
  DisparityMap disparity;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::string> warnings;
  std::size_t support_points = 0;  ///< after filtering
  std::optional<PipelineTaps> taps;
  std::vector<StageStats> stream_stats;  ///< streaming executor only
};

struct RunOptions {
  bool capture_taps = false;
};

/// Grid vectors, triangulation and prior rasterisation: the single-threaded
/// part both executors share. A degenerate point set falls back to grid
/// vectors only and records a warning.
prior::PriorField build_priors(const std::vector<sparse::SupportPoint>& filtered, int width,
                               int height, const PipelineConfig& cfg,
                               std::vector<std::string>& warnings,
                               prior::Triangulation* mesh_out = nullptr);

/// Reference executor: each stage consumes the previous stage's full output.
PipelineResult run_batch(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg,
                         RunOptions options = {});

/// Runs one frame under cfg.executor.
PipelineResult run_pipeline(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg,
                            RunOptions options = {});

/// Runs a sequence of frames; results are in input order. The streaming
/// executor uses cfg.frames_in_flight concurrent pipeline instances.
std::vector<PipelineResult> run_sequence(const std::vector<StereoPair>& frames,
                                         const PipelineConfig& cfg, RunOptions options = {});

void check_pair(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg);

}  // namespace streamelas
