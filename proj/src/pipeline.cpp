#include "streamelas/pipeline.hpp"

#include <chrono>

#include "streamelas/stream/executor.hpp"

namespace streamelas {
namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}

  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    out_.emplace_back(stage, std::chrono::duration<double, std::milli>(now - start_).count());
    start_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

void check_pair(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg) {
  cfg.validate();
  if (!left.same_shape(right)) {
    throw Error(ErrorCode::ShapeError, "left and right images differ in size");
  }
  const int need = std::max(cfg.sparse_window, cfg.dense_window);
  if (left.width() < need || left.height() < need) {
    throw Error(ErrorCode::InputTooSmall, "image smaller than the matching window");
  }
}

prior::PriorField build_priors(const std::vector<sparse::SupportPoint>& filtered, int width,
                               int height, const PipelineConfig& cfg,
                               std::vector<std::string>& warnings, prior::Triangulation* mesh_out) {
  prior::PriorField field;
  field.grid = prior::build_grid_vectors(filtered, width, height, cfg.disparity_range, cfg.prior);
  try {
    prior::Triangulation mesh = prior::delaunay(filtered);
    field.plane = prior::rasterize_prior(mesh, width, height);
    field.has_mesh = true;
    if (mesh_out) *mesh_out = std::move(mesh);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateInput) throw;
    warnings.push_back(std::string("triangulation skipped, using grid vectors only: ") + e.what());
    field.plane = prior::empty_prior(width, height);
    if (mesh_out) *mesh_out = {};
  }
  return field;
}

PipelineResult run_batch(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg,
                         RunOptions options) {
  check_pair(left, right, cfg);
  const simd::Kernels& kernels = cfg.kernels();
  PipelineResult result;
  StageClock clock(result.timings_ms);

  auto sparse_left = census::census_transform(left, cfg.sparse_census(), kernels);
  auto sparse_right = census::census_transform(right, cfg.sparse_census(), kernels);
  clock.lap("census");

  auto candidates = sparse::downsample_support(
      sparse::match_support(sparse_left, sparse_right, cfg.sparse(), kernels), cfg.downsample);
  clock.lap("sparse");

  auto filtered = filter::redundancy_filter_backwards(
      filter::consistency_filter(candidates, cfg.filter), cfg.filter);
  clock.lap("filter");

  prior::Triangulation mesh;
  prior::PriorField priors =
      build_priors(filtered, left.width(), left.height(), cfg, result.warnings, &mesh);
  clock.lap("prior");

  census::CensusField dense_left;
  census::CensusField dense_right;
  if (cfg.dense_window == cfg.sparse_window) {
    dense_left = sparse_left;
    dense_right = sparse_right;
  } else {
    dense_left = census::census_transform(left, cfg.dense_census(), kernels);
    dense_right = census::census_transform(right, cfg.dense_census(), kernels);
  }
  DisparityMap raw = dense::dense_match(
      dense_left, dense_right, [&](int u, int v) { return priors.candidates(u, v); }, cfg.dense(),
      kernels);
  clock.lap("dense");

  result.disparity = cfg.median_radius > 0 ? dense::median_filter(raw, cfg.median_radius) : raw;
  clock.lap("median");
  result.support_points = filtered.size();

  if (options.capture_taps) {
    result.taps = PipelineTaps{std::move(sparse_left), std::move(sparse_right), std::move(dense_left),
                               std::move(dense_right), std::move(candidates), std::move(filtered),
                               std::move(mesh), std::move(priors), std::move(raw)};
  }
  return result;
}

PipelineResult run_pipeline(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg,
                            RunOptions options) {
  if (cfg.executor == Executor::Stream) {
    return stream::run_streaming_frame(left, right, cfg, options);
  }
  return run_batch(left, right, cfg, options);
}

std::vector<PipelineResult> run_sequence(const std::vector<StereoPair>& frames,
                                         const PipelineConfig& cfg, RunOptions options) {
  if (cfg.executor == Executor::Stream) {
    return stream::run_streaming_pipeline(frames, cfg, options);
  }
  std::vector<PipelineResult> out;
  out.reserve(frames.size());
  for (const StereoPair& f : frames) out.push_back(run_batch(f.left, f.right, cfg, options));
  return out;
}

}  // namespace streamelas
