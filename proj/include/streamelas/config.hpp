#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "streamelas/census.hpp"
#include "streamelas/dense.hpp"
#include "streamelas/filter.hpp"
#include "streamelas/prior.hpp"
#include "streamelas/sparse.hpp"

namespace streamelas {

enum class Executor { Batch, Stream };

std::string_view to_string(Executor e);
Executor parse_executor(std::string_view name);

/// Every tunable of the pipeline. The text form is one `key = value` per
/// line; '#' starts a comment. Keys and defaults:
///
///   sparse_window            9      census window for support matching (3..13, odd)
///   dense_window             5      census window for dense matching (3, 5, 7)
///   disparity_range          128    D, disparities 0..D-1 (2..256)
///   lr_check                 false  left-right check on support points
///   downsample               8      keep 1/N of support candidates (1,2,4,8,16,32)
///   consistency_radius       10     R_c
///   consistency_tolerance    5      tau_c
///   consistency_min_neighbors 2     k
///   redundancy_distance      5      R_r
///   redundancy_tolerance     1      tau_r
///   grid_size                20     grid-vector cell size in pixels
///   grid_neighborhood        true   pool support points into the 3x3 cell neighbourhood
///   median_radius            0      median post-filter radius, 0 = off
///   lr_check_dense           false  left-right check on the dense map
///   executor                 batch  batch | stream
///   frames_in_flight         1      1 or 2 concurrent pipeline instances (stream)
///   stage_depth              1      pipeline registers per streaming stage
///   isa                      auto   auto | scalar | avx2
struct PipelineConfig {
  int sparse_window = 9;
  int dense_window = 5;
  int disparity_range = 128;
  bool lr_check = false;
  int downsample = 8;
  filter::FilterConfig filter;
  prior::PriorConfig prior;
  int median_radius = 0;
  bool lr_check_dense = false;
  Executor executor = Executor::Batch;
  int frames_in_flight = 1;
  int stage_depth = 1;
  std::string isa = "auto";

  census::CensusConfig sparse_census() const { return {sparse_window}; }
  census::CensusConfig dense_census() const { return {dense_window}; }
  sparse::SparseConfig sparse() const { return {disparity_range, lr_check, downsample}; }
  dense::DenseConfig dense() const {
    return {dense_window, disparity_range, median_radius, lr_check_dense};
  }
  const simd::Kernels& kernels() const { return simd::kernels_for(simd::parse_isa(isa)); }

  void validate() const;

  /// Sets one key; throws InvalidConfig on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  std::string to_text() const;
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace streamelas
