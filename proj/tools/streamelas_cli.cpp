#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "streamelas/eval.hpp"
#include "streamelas/imageio.hpp"
#include "streamelas/pipeline.hpp"
#include "streamelas/stream/cycle_model.hpp"
#include "streamelas/synthetic.hpp"

namespace se = streamelas;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
};

void add_config_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key=value configuration file");
  cmd->add_option("--set", opts.overrides, "override one key, e.g. --set disparity_range=64");
}

se::PipelineConfig build_config(const CommonOptions& opts) {
  se::PipelineConfig cfg = opts.config_path.empty() ? se::PipelineConfig{} : se::load_config(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw se::Error(se::ErrorCode::InvalidConfig, "--set expects key=value, got " + kv);
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw se::Error(se::ErrorCode::WriteError, "cannot write " + path);
}

int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

json timings_json(const std::vector<std::pair<std::string, double>>& t) {
  json j = json::object();
  for (const auto& [stage, ms] : t) j[stage] = ms;
  return j;
}

json stats_json(const std::vector<se::StageStats>& stats) {
  json j = json::array();
  for (const se::StageStats& s : stats) {
    j.push_back({{"stage", s.stage},
                 {"fill_latency_steps", s.fill_latency_steps},
                 {"active_steps", s.active_steps},
                 {"outputs", s.outputs},
                 {"peak_resident_rows", s.peak_resident_rows}});
  }
  return j;
}

int cmd_depth(const CommonOptions& common, const std::string& left, const std::string& right,
              const std::string& output, const std::string& format) {
  const se::PipelineConfig cfg = build_config(common);
  const se::GrayImage l = se::imageio::load_gray(left);
  const se::GrayImage r = se::imageio::load_gray(right);
  const se::PipelineResult result = se::run_pipeline(l, r, cfg);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
  const auto fmt = format.empty() ? se::imageio::format_from_extension(output)
                                  : se::imageio::parse_disparity_format(format);
  se::imageio::save_disparity(result.disparity, output, fmt, cfg.disparity_range);
  std::cerr << "support points: " << result.support_points << '\n';
  for (const auto& [stage, ms] : result.timings_ms) std::fprintf(stderr, "%-8s %9.2f ms\n", stage.c_str(), ms);
  return 0;
}

int cmd_eval(const CommonOptions& common, const std::string& dataset, const std::string& gt,
             int threads) {
  const se::PipelineConfig cfg = build_config(common);
  const auto entries =
      se::eval::discover_dataset(dataset, gt.empty() ? std::nullopt : std::optional<std::filesystem::path>(gt));
  const auto result = se::eval::evaluate(entries, cfg, threads,
                                         [](const std::string& msg) { std::cerr << "error: " << msg << '\n'; });
  std::ostringstream csv;
  csv << "image,error_pct,error_all_pct,density,support_points,ms\n";
  char buf[128];
  for (const auto& img : result.images) {
    if (!img.ok) continue;
    if (img.rates) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.4f", 100.0 * img.rates->rate(),
                    100.0 * img.rates->rate_all(), img.rates->density());
    } else {
      std::snprintf(buf, sizeof buf, ",,");
    }
    csv << img.name << ',' << buf << ',' << img.support_points << ',';
    std::snprintf(buf, sizeof buf, "%.2f", img.ms);
    csv << buf << '\n';
  }
  std::cout << csv.str();
  std::fprintf(stderr, "images %zu, with gt %d, failed %d\nmean error %.3f %% (all gt: %.3f %%), density %.4f\n",
               entries.size(), result.evaluated, result.failed, result.mean_error, result.mean_error_all,
               result.mean_density);
  return result.failed == 0 ? 0 : 1;
}

int cmd_sweep(const CommonOptions& common, const std::string& dataset, const std::string& gt,
              const std::string& windows, const std::string& dense, const std::string& downsample,
              int threads, bool no_timing, const std::string& output) {
  const se::PipelineConfig cfg = build_config(common);
  const auto entries =
      se::eval::discover_dataset(dataset, gt.empty() ? std::nullopt : std::optional<std::filesystem::path>(gt));
  se::eval::SweepGrid grid;
  grid.sparse_windows = se::eval::parse_int_list(windows);
  grid.dense_windows = se::eval::parse_int_list(dense);
  grid.downsample = se::eval::parse_int_list(downsample);
  const auto rows = se::eval::sweep(entries, cfg, grid, threads,
                                    [](const std::string& msg) { std::cerr << "error: " << msg << '\n'; });
  write_text(output, se::eval::sweep_csv(rows, !no_timing));
  return 0;
}

int cmd_bench(const CommonOptions& common, const std::string& executor, int frames_in_flight,
              int frames, int width, int height, const std::string& left, const std::string& right,
              int warmup) {
  se::PipelineConfig cfg = build_config(common);
  cfg.executor = se::parse_executor(executor);
  cfg.frames_in_flight = frames_in_flight;
  cfg.validate();

  std::vector<se::StereoPair> seq;
  if (!left.empty() || !right.empty()) {
    const se::StereoPair pair{se::imageio::load_gray(left), se::imageio::load_gray(right)};
    seq.assign(static_cast<std::size_t>(frames), pair);
  } else {
    for (int k = 0; k < frames; ++k) {
      seq.push_back(se::synthetic::constant_shift(width, height, std::min(cfg.disparity_range / 2, 16),
                                                  1000 + static_cast<std::uint64_t>(k))
                        .pair);
    }
  }
  const int w = seq.front().left.width();
  const int h = seq.front().left.height();

  for (int i = 0; i < warmup; ++i) se::run_pipeline(seq.front().left, seq.front().right, cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto results = se::run_sequence(seq, cfg);
  const double total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  json report;
  report["executor"] = se::to_string(cfg.executor);
  report["isa"] = se::simd::to_string(cfg.kernels().isa);
  report["frames_in_flight"] = cfg.frames_in_flight;
  report["frames"] = frames;
  report["width"] = w;
  report["height"] = h;
  report["wall_ms_total"] = total_ms;
  report["wall_ms_per_frame"] = total_ms / frames;
  report["stage_ms_first_frame"] = timings_json(results.front().timings_ms);
  if (!results.front().stream_stats.empty()) report["stream_stats"] = stats_json(results.front().stream_stats);
  report["cycle_model"] = json::parse(se::stream::report_cycle_model(cfg, w, h).to_json());
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_inspect(const CommonOptions& common, const std::string& stage, const std::string& left,
                const std::string& right, const std::string& output) {
  const se::PipelineConfig cfg = build_config(common);
  const se::GrayImage l = se::imageio::load_gray(left);
  const se::GrayImage r = se::imageio::load_gray(right);
  se::RunOptions opts;
  opts.capture_taps = true;
  const se::PipelineResult result = se::run_pipeline(l, r, cfg, opts);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
  const se::PipelineTaps& taps = *result.taps;

  std::ostringstream out;
  auto points_csv = [&](const std::vector<se::sparse::SupportPoint>& pts) {
    out << "u,v,d\n";
    for (const auto& p : pts) out << p.u << ',' << p.v << ',' << p.d << '\n';
  };
  if (stage == "support") {
    points_csv(taps.candidates);
  } else if (stage == "filtered") {
    points_csv(taps.filtered);
  } else if (stage == "grid") {
    const auto& grid = taps.prior.grid;
    out << "cu,cv,mask\n";
    for (int cv = 0; cv < grid.cells_v(); ++cv) {
      for (int cu = 0; cu < grid.cells_u(); ++cu) {
        out << cu << ',' << cv << ',' << grid.cell(cu, cv).to_hex(grid.disparity_range()) << '\n';
      }
    }
  } else if (stage == "mesh") {
    for (const auto& p : taps.mesh.vertices) out << "v " << p.u << ' ' << p.v << ' ' << p.d << '\n';
    for (const auto& t : taps.mesh.triangles) {
      out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
  } else if (stage == "prior") {
    if (output.empty() || output == "-") {
      throw se::Error(se::ErrorCode::InvalidConfig, "--stage prior writes PFM and needs -o FILE");
    }
    se::Plane<float> prior = taps.prior.plane.prior;
    for (int v = 0; v < prior.height(); ++v) {
      for (int u = 0; u < prior.width(); ++u) {
        if (!taps.prior.plane.is_covered(u, v)) prior.at(u, v) = -1.0f;
      }
    }
    se::imageio::save_pfm(prior, output);
    return 0;
  }
  write_text(output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streamelas: census-based stereo matching with batch and streaming executors"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string left, right, output, format, dataset, gt;
  int threads = default_threads();

  auto* depth = app.add_subcommand("depth", "compute a disparity map for one rectified pair");
  depth->add_option("-l,--left", left, "left image (.pgm or .png)")->required();
  depth->add_option("-r,--right", right, "right image")->required();
  depth->add_option("-o,--output", output, "output disparity (.pgm, .png or .pfm)")->required();
  depth->add_option("--format", format, "pgm8-scaled, png16-kitti or pfm (default: from extension)");
  add_config_options(depth, common);

  auto* ev = app.add_subcommand("eval", "KITTI error over a dataset folder");
  ev->add_option("--dataset", dataset, "folder with image_0/image_1 or left/right")->required();
  ev->add_option("--gt", gt, "ground-truth folder (16-bit PNG, disparity * 256)");
  ev->add_option("--threads", threads, "images evaluated concurrently");
  add_config_options(ev, common);

  std::string windows = "7,9,11,13", dense = "3,5,7", downsample = "1,8,32";
  bool no_timing = false;
  auto* sw = app.add_subcommand("sweep", "error and density over a window/downsample grid (CSV)");
  sw->add_option("--dataset", dataset, "dataset folder")->required();
  sw->add_option("--gt", gt, "ground-truth folder");
  sw->add_option("--windows", windows, "sparse census windows");
  sw->add_option("--dense", dense, "dense census windows");
  sw->add_option("--downsample", downsample, "support point downsampling denominators");
  sw->add_option("--threads", threads, "images evaluated concurrently");
  sw->add_flag("--no-timing", no_timing, "omit the ms_per_frame column");
  sw->add_option("-o,--output", output, "CSV output (default stdout)");
  add_config_options(sw, common);

  std::string executor = "stream";
  int frames_in_flight = 1, frames = 4, width = 640, height = 480, warmup = 1;
  auto* bench = app.add_subcommand("bench", "wall time, stream step counters and the cycle model (JSON)");
  bench->add_option("--executor", executor, "batch or stream")->check(CLI::IsMember({"batch", "stream"}));
  bench->add_option("--frames-in-flight", frames_in_flight, "concurrent pipeline instances")
      ->check(CLI::IsMember({1, 2}));
  bench->add_option("--frames", frames, "frames in the sequence")->check(CLI::PositiveNumber);
  bench->add_option("--width", width, "synthetic frame width");
  bench->add_option("--height", height, "synthetic frame height");
  bench->add_option("-l,--left", left, "use this left image instead of a synthetic pair");
  bench->add_option("-r,--right", right, "right image");
  bench->add_option("--warmup", warmup, "untimed runs before measuring");
  add_config_options(bench, common);

  std::string stage;
  auto* inspect = app.add_subcommand("inspect", "dump one intermediate stage");
  inspect->add_option("--stage", stage, "support, filtered, grid, mesh or prior")
      ->required()
      ->check(CLI::IsMember({"support", "filtered", "grid", "mesh", "prior"}));
  inspect->add_option("-l,--left", left, "left image")->required();
  inspect->add_option("-r,--right", right, "right image")->required();
  inspect->add_option("-o,--output", output, "output file (default stdout)");
  add_config_options(inspect, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*depth) return cmd_depth(common, left, right, output, format);
    if (*ev) return cmd_eval(common, dataset, gt, threads);
    if (*sw) return cmd_sweep(common, dataset, gt, windows, dense, downsample, threads, no_timing, output);
    if (*bench) return cmd_bench(common, executor, frames_in_flight, frames, width, height, left, right, warmup);
    if (*inspect) return cmd_inspect(common, stage, left, right, output);
  } catch (const se::Error& e) {
    std::cerr << "error (" << se::to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
