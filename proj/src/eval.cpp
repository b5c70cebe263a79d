#include "streamelas/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "streamelas/imageio.hpp"

namespace streamelas::eval {

namespace fs = std::filesystem;

ErrorRates kitti_error(const DisparityMap& estimate, const GroundTruth& gt) {
  if (estimate.width() != gt.raw.width() || estimate.height() != gt.raw.height()) {
    throw Error(ErrorCode::ShapeError, "estimate and ground truth differ in size");
  }
  ErrorRates r;
  r.pixels = static_cast<std::int64_t>(estimate.width()) * estimate.height();
  for (int v = 0; v < estimate.height(); ++v) {
    for (int u = 0; u < estimate.width(); ++u) {
      const bool has_est = estimate.at(u, v) != kInvalidDisparity;
      if (has_est) ++r.estimated;
      if (!gt.has(u, v)) continue;
      ++r.gt_valid;
      if (!has_est) {
        ++r.bad_all;
        continue;
      }
      ++r.both_valid;
      if (is_bad_pixel(estimate.at(u, v), gt.disparity(u, v))) {
        ++r.bad_both_valid;
        ++r.bad_all;
      }
    }
  }
  return r;
}

namespace {

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

std::map<std::string, fs::path> list_images(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image(e.path())) out[e.path().filename().string()] = e.path();
  }
  return out;
}

}  // namespace

std::vector<DatasetEntry> discover_dataset(const fs::path& dir, const std::optional<fs::path>& gt_dir) {
  static const std::pair<const char*, const char*> kLayouts[] = {
      {"image_0", "image_1"}, {"image_2", "image_3"}, {"left", "right"}};
  fs::path left_dir;
  fs::path right_dir;
  for (const auto& [l, r] : kLayouts) {
    if (fs::is_directory(dir / l) && fs::is_directory(dir / r)) {
      left_dir = dir / l;
      right_dir = dir / r;
      break;
    }
  }
  if (left_dir.empty()) {
    throw Error(ErrorCode::IoError, "no image_0/image_1, image_2/image_3 or left/right folders in " +
                                        dir.string());
  }
  fs::path truth = gt_dir.value_or(fs::path{});
  if (truth.empty()) {
    for (const char* name : {"disp_noc_0", "disp_noc", "disp_occ_0", "disp_occ"}) {
      if (fs::is_directory(dir / name)) {
        truth = dir / name;
        break;
      }
    }
  }
  const auto rights = list_images(right_dir);
  std::vector<DatasetEntry> entries;
  for (const auto& [name, left] : list_images(left_dir)) {
    const auto it = rights.find(name);
    if (it == rights.end()) continue;
    DatasetEntry e{name, left, it->second, std::nullopt};
    if (!truth.empty() && fs::is_regular_file(truth / name)) e.gt = truth / name;
    entries.push_back(std::move(e));
  }
  return entries;
}

namespace {

ImageResult run_one(const DatasetEntry& entry, const PipelineConfig& cfg) {
  ImageResult r;
  r.name = entry.name;
  try {
    const GrayImage left = imageio::load_gray(entry.left);
    const GrayImage right = imageio::load_gray(entry.right);
    const auto start = std::chrono::steady_clock::now();
    PipelineResult out = run_pipeline(left, right, cfg);
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.support_points = out.support_points;
    r.timings_ms = std::move(out.timings_ms);
    if (entry.gt) r.rates = kitti_error(out.disparity, imageio::load_gt_png16(*entry.gt));
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

EvalResult evaluate(const std::vector<DatasetEntry>& entries, const PipelineConfig& cfg, int threads,
                    const Logger& log) {
  cfg.validate();
  EvalResult result;
  result.images.resize(entries.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      result.images[i] = run_one(entries[i], cfg);
      if (!result.images[i].ok && log) {
        std::lock_guard lock(log_mutex);
        log(entries[i].name + ": " + result.images[i].error);
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  int ran = 0;
  for (const ImageResult& r : result.images) {
    if (!r.ok) {
      ++result.failed;
      continue;
    }
    ++ran;
    result.mean_ms += r.ms;
    if (!r.rates) continue;
    ++result.evaluated;
    result.mean_error += 100.0 * r.rates->rate();
    result.mean_error_all += 100.0 * r.rates->rate_all();
    result.mean_density += r.rates->density();
  }
  if (result.evaluated > 0) {
    result.mean_error /= result.evaluated;
    result.mean_error_all /= result.evaluated;
    result.mean_density /= result.evaluated;
  }
  if (ran > 0) result.mean_ms /= ran;
  return result;
}

std::vector<SweepRow> sweep(const std::vector<DatasetEntry>& entries, const PipelineConfig& base,
                            const SweepGrid& grid, int threads, const Logger& log) {
  std::vector<SweepRow> rows;
  for (int ws : grid.sparse_windows) {
    for (int wd : grid.dense_windows) {
      for (int ds : grid.downsample) {
        PipelineConfig cfg = base;
        cfg.sparse_window = ws;
        cfg.dense_window = wd;
        cfg.downsample = ds;
        const EvalResult e = evaluate(entries, cfg, threads, log);
        rows.push_back({ws, wd, ds, e.mean_error, e.mean_error_all, e.mean_density, e.mean_ms,
                        e.evaluated});
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_timing) {
  std::ostringstream out;
  out << "sparse_window,dense_window,downsample,error_pct,error_all_pct,density,images";
  if (with_timing) out << ",ms_per_frame";
  out << '\n';
  char buf[64];
  for (const SweepRow& r : rows) {
    out << r.sparse_window << ',' << r.dense_window << ',' << r.downsample << ',';
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.4f", r.error_pct, r.error_all_pct, r.density);
    out << buf << ',' << r.images;
    if (with_timing) {
      std::snprintf(buf, sizeof buf, ",%.2f", r.ms_per_frame);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "not an integer list: " + text);
    }
  }
  return out;
}

}  // namespace streamelas::eval
