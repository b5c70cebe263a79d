#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamelas/config.hpp"

namespace streamelas::stream {

struct StageModel {
  std::string stage;
  std::int64_t fill_latency_steps = 0;  ///< buffer look-ahead plus register depth
  std::int64_t steps_per_frame = 0;     ///< one pixel per step
};

/// Step counts for the two streamed stage groups of one frame. The census
/// stages of a left/right pair run in lockstep and appear once per group.
struct CycleReport {
  int width = 0;
  int height = 0;
  std::vector<StageModel> front;  ///< census, support matching, filtering
  std::vector<StageModel> dense;  ///< census, dense matching
  std::int64_t front_total_steps = 0;
  std::int64_t dense_total_steps = 0;

  std::int64_t pixels() const noexcept { return static_cast<std::int64_t>(width) * height; }
  /// Both groups back to back, as seen by one pipeline instance.
  std::int64_t total_steps() const noexcept { return front_total_steps + dense_total_steps; }
  std::string to_json() const;
};

CycleReport report_cycle_model(const PipelineConfig& cfg, int width, int height);

struct ResolutionRatio {
  double pixel_ratio = 0;          ///< (w1*h1) / (w2*h2)
  double steps_per_frame_ratio = 0;
  double total_steps_ratio = 0;    ///< includes fill latency
};

ResolutionRatio predict_ratio(const PipelineConfig& cfg, int w1, int h1, int w2, int h2);

}  // namespace streamelas::stream
