#include "streamelas/stream/executor.hpp"

#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>

#include "streamelas/stream/channel.hpp"
#include "streamelas/stream/stages.hpp"

namespace streamelas::stream {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::optional<std::uint8_t> pixel_at(const GrayImage& img, std::int64_t step) {
  if (step >= static_cast<std::int64_t>(img.pixels().size())) return std::nullopt;
  return img.pixels()[static_cast<std::size_t>(step)];
}

void store(census::CensusField& field, std::int64_t index, const CensusToken& t) {
  field.at(static_cast<int>(index % field.width()), static_cast<int>(index / field.width())) =
      t.descriptor;
}

// Ticks a left/right census pair in lockstep and returns the paired token.
std::optional<CensusPair> tick_pair(CensusStage& left, CensusStage& right,
                                    const std::optional<std::uint8_t>& l,
                                    const std::optional<std::uint8_t>& r) {
  auto a = left.tick(l);
  auto b = right.tick(r);
  if (a.has_value() != b.has_value()) throw std::logic_error("census pair out of lockstep");
  if (!a) return std::nullopt;
  return CensusPair{*a, *b};
}

struct FrontOutput {
  std::vector<sparse::SupportPoint> filtered;
  std::vector<sparse::SupportPoint> candidates;
  census::CensusField left;
  census::CensusField right;
  std::vector<StageStats> stats;
  double ms = 0;
};

FrontOutput run_front(const GrayImage& left, const GrayImage& right, const PipelineConfig& cfg,
                      bool capture) {
  const auto start = std::chrono::steady_clock::now();
  const int w = left.width();
  const int h = left.height();
  const int depth = cfg.stage_depth;
  CensusStage census_l("census_sparse", w, h, cfg.sparse_census(), depth);
  CensusStage census_r("census_sparse", w, h, cfg.sparse_census(), depth);
  SparseStage matcher(w, h, cfg.sparse_census().radius(), cfg.sparse(), depth);
  FilterStage filter(w, h, cfg.filter, depth);

  FrontOutput out;
  if (capture) {
    out.left = census::CensusField(w, h, cfg.sparse_census());
    out.right = census::CensusField(w, h, cfg.sparse_census());
  }
  for (std::int64_t step = 0; !filter.done(); ++step) {
    auto pair = tick_pair(census_l, census_r, pixel_at(left, step), pixel_at(right, step));
    if (pair && capture) {
      store(out.left, census_l.emitted() - 1, pair->first);
      store(out.right, census_r.emitted() - 1, pair->second);
    }
    auto candidate = matcher.tick(pair);
    if (candidate && *candidate && capture) out.candidates.push_back(**candidate);
    auto kept = filter.tick(candidate);
    if (kept && *kept) out.filtered.push_back(**kept);
  }
  out.stats = {census_l.stats(), matcher.stats(), filter.stats()};
  out.ms = elapsed_ms(start);
  return out;
}

struct PriorOutput {
  FrontOutput front;
  prior::PriorField priors;
  prior::Triangulation mesh;
  std::vector<std::string> warnings;
  double ms = 0;
};

PriorOutput run_prior(FrontOutput front, int width, int height, const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PriorOutput out;
  out.priors = build_priors(front.filtered, width, height, cfg, out.warnings, &out.mesh);
  out.front = std::move(front);
  out.ms = elapsed_ms(start);
  return out;
}

PipelineResult run_dense(PriorOutput prior, const GrayImage& left, const GrayImage& right,
                         const PipelineConfig& cfg, bool capture) {
  auto start = std::chrono::steady_clock::now();
  const int w = left.width();
  const int h = left.height();
  const int depth = cfg.stage_depth;
  CensusStage census_l("census_dense", w, h, cfg.dense_census(), depth);
  CensusStage census_r("census_dense", w, h, cfg.dense_census(), depth);
  DenseStage matcher(w, h, cfg.dense_census().radius(), cfg.dense(), prior.priors, depth);

  DisparityMap raw(w, h, kInvalidDisparity);
  census::CensusField dense_left;
  census::CensusField dense_right;
  if (capture) {
    dense_left = census::CensusField(w, h, cfg.dense_census());
    dense_right = census::CensusField(w, h, cfg.dense_census());
  }
  for (std::int64_t step = 0; !matcher.done(); ++step) {
    auto pair = tick_pair(census_l, census_r, pixel_at(left, step), pixel_at(right, step));
    if (pair && capture) {
      store(dense_left, census_l.emitted() - 1, pair->first);
      store(dense_right, census_r.emitted() - 1, pair->second);
    }
    if (auto d = matcher.tick(pair)) {
      const std::int64_t k = matcher.emitted() - 1;
      raw.at(static_cast<int>(k % w), static_cast<int>(k / w)) = *d;
    }
  }

  PipelineResult result;
  result.timings_ms = {{"front", prior.front.ms}, {"prior", prior.ms}, {"dense", elapsed_ms(start)}};
  start = std::chrono::steady_clock::now();
  result.disparity = cfg.median_radius > 0 ? dense::median_filter(raw, cfg.median_radius) : raw;
  result.timings_ms.emplace_back("median", elapsed_ms(start));
  result.warnings = std::move(prior.warnings);
  result.support_points = prior.front.filtered.size();
  result.stream_stats = std::move(prior.front.stats);
  result.stream_stats.push_back(census_l.stats());
  result.stream_stats.push_back(matcher.stats());
  if (capture) {
    result.taps = PipelineTaps{std::move(prior.front.left),  std::move(prior.front.right),
                               std::move(dense_left),        std::move(dense_right),
                               std::move(prior.front.candidates), std::move(prior.front.filtered),
                               std::move(prior.mesh),        std::move(prior.priors),
                               std::move(raw)};
  }
  return result;
}

// Collects the first exception raised by any worker and closes every channel
// so blocked peers wake up and exit.
class FailureLatch {
 public:
  void fail(std::exception_ptr e, const std::vector<std::function<void()>>& closers) {
    {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = e;
    }
    for (const auto& close : closers) close();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

PipelineResult run_streaming_frame(const GrayImage& left, const GrayImage& right,
                                   const PipelineConfig& cfg, RunOptions options) {
  check_pair(left, right, cfg);
  FrontOutput front = run_front(left, right, cfg, options.capture_taps);
  PriorOutput prior = run_prior(std::move(front), left.width(), left.height(), cfg);
  return run_dense(std::move(prior), left, right, cfg, options.capture_taps);
}

std::vector<PipelineResult> run_streaming_pipeline(const std::vector<StereoPair>& frames,
                                                   const PipelineConfig& cfg, RunOptions options) {
  for (const StereoPair& f : frames) check_pair(f.left, f.right, cfg);
  const int instances = cfg.frames_in_flight;
  std::vector<PipelineResult> results(frames.size());

  struct Tagged {
    std::size_t frame;
    FrontOutput front;
  };
  struct TaggedPrior {
    std::size_t frame;
    PriorOutput prior;
  };
  std::vector<std::unique_ptr<BoundedChannel<Tagged>>> to_prior;
  std::vector<std::unique_ptr<BoundedChannel<TaggedPrior>>> to_dense;
  std::vector<std::function<void()>> closers;
  for (int i = 0; i < instances; ++i) {
    to_prior.push_back(std::make_unique<BoundedChannel<Tagged>>(1));
    to_dense.push_back(std::make_unique<BoundedChannel<TaggedPrior>>(1));
    closers.push_back([c = to_prior.back().get()] { c->close(); });
    closers.push_back([c = to_dense.back().get()] { c->close(); });
  }

  FailureLatch latch;
  std::vector<std::thread> workers;
  for (int i = 0; i < instances; ++i) {
    auto& a_to_b = *to_prior[i];
    auto& b_to_c = *to_dense[i];
    workers.emplace_back([&, i] {
      try {
        for (std::size_t k = i; k < frames.size(); k += instances) {
          auto front = run_front(frames[k].left, frames[k].right, cfg, options.capture_taps);
          if (!a_to_b.push({k, std::move(front)})) return;
        }
        a_to_b.close();
      } catch (...) {
        latch.fail(std::current_exception(), closers);
      }
    });
    workers.emplace_back([&] {
      try {
        while (auto item = a_to_b.pop()) {
          const GrayImage& img = frames[item->frame].left;
          auto prior = run_prior(std::move(item->front), img.width(), img.height(), cfg);
          if (!b_to_c.push({item->frame, std::move(prior)})) return;
        }
        b_to_c.close();
      } catch (...) {
        latch.fail(std::current_exception(), closers);
      }
    });
    workers.emplace_back([&] {
      try {
        while (auto item = b_to_c.pop()) {
          const StereoPair& f = frames[item->frame];
          results[item->frame] =
              run_dense(std::move(item->prior), f.left, f.right, cfg, options.capture_taps);
        }
      } catch (...) {
        latch.fail(std::current_exception(), closers);
      }
    });
  }
  for (std::thread& t : workers) t.join();
  latch.rethrow();
  return results;
}

}  // namespace streamelas::stream
