#include "streamelas/stream/cycle_model.hpp"

#include <algorithm>
#include <json.hpp>

namespace streamelas::stream {
namespace {

StageModel stage(std::string name, std::int64_t lookahead, std::int64_t pixels, int depth) {
  return {std::move(name), std::min(lookahead, pixels - 1) + depth, pixels};
}

std::int64_t group_total(const std::vector<StageModel>& stages, std::int64_t pixels) {
  std::int64_t total = pixels;
  for (const StageModel& s : stages) total += s.fill_latency_steps;
  return total;
}

nlohmann::json stages_json(const std::vector<StageModel>& stages) {
  auto out = nlohmann::json::array();
  for (const StageModel& s : stages) {
    out.push_back({{"stage", s.stage},
                   {"fill_latency_steps", s.fill_latency_steps},
                   {"steps_per_frame", s.steps_per_frame}});
  }
  return out;
}

}  // namespace

CycleReport report_cycle_model(const PipelineConfig& cfg, int width, int height) {
  cfg.validate();
  if (width < 1 || height < 1) throw Error(ErrorCode::ShapeError, "frame size must be positive");
  CycleReport r;
  r.width = width;
  r.height = height;
  const std::int64_t n = r.pixels();
  const int depth = cfg.stage_depth;
  const std::int64_t hs = cfg.sparse_census().radius();
  const std::int64_t hd = cfg.dense_census().radius();
  const std::int64_t rc = cfg.filter.consistency_radius;
  const std::int64_t lr_look = cfg.disparity_range - 1;

  r.front = {stage("census_sparse", hs * width + hs, n, depth),
             stage("sparse_match", cfg.lr_check ? lr_look : 0, n, depth),
             stage("filter", rc * width + rc, n, depth)};
  r.dense = {stage("census_dense", hd * width + hd, n, depth),
             stage("dense_match", cfg.lr_check_dense ? lr_look : 0, n, depth)};
  r.front_total_steps = group_total(r.front, n);
  r.dense_total_steps = group_total(r.dense, n);
  return r;
}

std::string CycleReport::to_json() const {
  nlohmann::json j;
  j["width"] = width;
  j["height"] = height;
  j["stages"] = stages_json(front);
  for (auto& s : stages_json(dense)) j["stages"].push_back(s);
  j["front_total_steps"] = front_total_steps;
  j["dense_total_steps"] = dense_total_steps;
  j["total_steps"] = total_steps();
  return j.dump(2);
}

ResolutionRatio predict_ratio(const PipelineConfig& cfg, int w1, int h1, int w2, int h2) {
  const CycleReport a = report_cycle_model(cfg, w1, h1);
  const CycleReport b = report_cycle_model(cfg, w2, h2);
  ResolutionRatio r;
  r.pixel_ratio = static_cast<double>(a.pixels()) / static_cast<double>(b.pixels());
  r.steps_per_frame_ratio = static_cast<double>(a.front.front().steps_per_frame) /
                            static_cast<double>(b.front.front().steps_per_frame);
  r.total_steps_ratio = static_cast<double>(a.total_steps()) / static_cast<double>(b.total_steps());
  return r;
}

}  // namespace streamelas::stream
