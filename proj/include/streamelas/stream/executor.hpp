#pragma once

#include <vector>

#include "streamelas/pipeline.hpp"

namespace streamelas::stream {

/// Streams one frame through the three stage groups in turn: census,
/// support matching and filtering; priors; dense census and matching.
/// Result fields match run_batch exactly, plus per-stage step statistics.
PipelineResult run_streaming_frame(const GrayImage& left, const GrayImage& right,
                                   const PipelineConfig& cfg, RunOptions options = {});

/// Each pipeline instance runs its three groups on separate threads joined
/// by single-slot channels, so group A of frame k+1 overlaps the later
/// groups of frame k. cfg.frames_in_flight instances take frames round-robin.
std::vector<PipelineResult> run_streaming_pipeline(const std::vector<StereoPair>& frames,
                                                   const PipelineConfig& cfg, RunOptions options = {});

}  // namespace streamelas::stream
