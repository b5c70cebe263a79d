#include "streamelas/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace streamelas {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int to_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::InvalidConfig,
                "key '" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw Error(ErrorCode::InvalidConfig,
              "key '" + std::string(key) + "' expects a boolean, got '" + std::string(value) + "'");
}

}  // namespace

std::string_view to_string(Executor e) { return e == Executor::Batch ? "batch" : "stream"; }

Executor parse_executor(std::string_view name) {
  if (name == "batch") return Executor::Batch;
  if (name == "stream") return Executor::Stream;
  throw Error(ErrorCode::InvalidConfig, "unknown executor '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  sparse_census().validate();
  sparse().validate();
  dense().validate();
  filter.validate();
  prior.validate();
  if (frames_in_flight != 1 && frames_in_flight != 2) {
    throw Error(ErrorCode::InvalidConfig, "frames_in_flight must be 1 or 2");
  }
  if (stage_depth < 0) {
    throw Error(ErrorCode::InvalidConfig, "stage_depth must be >= 0");
  }
  simd::parse_isa(isa);
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  if (key == "sparse_window") sparse_window = to_int(key, value);
  else if (key == "dense_window") dense_window = to_int(key, value);
  else if (key == "disparity_range") disparity_range = to_int(key, value);
  else if (key == "lr_check") lr_check = to_bool(key, value);
  else if (key == "downsample") downsample = to_int(key, value);
  else if (key == "consistency_radius") filter.consistency_radius = to_int(key, value);
  else if (key == "consistency_tolerance") filter.consistency_tolerance = to_int(key, value);
  else if (key == "consistency_min_neighbors") filter.min_consistent_neighbors = to_int(key, value);
  else if (key == "redundancy_distance") filter.redundancy_distance = to_int(key, value);
  else if (key == "redundancy_tolerance") filter.redundancy_tolerance = to_int(key, value);
  else if (key == "grid_size") prior.grid_size = to_int(key, value);
  else if (key == "grid_neighborhood") prior.grid_neighborhood = to_bool(key, value);
  else if (key == "median_radius") median_radius = to_int(key, value);
  else if (key == "lr_check_dense") lr_check_dense = to_bool(key, value);
  else if (key == "executor") executor = parse_executor(value);
  else if (key == "frames_in_flight") frames_in_flight = to_int(key, value);
  else if (key == "stage_depth") stage_depth = to_int(key, value);
  else if (key == "isa") isa = std::string(value);
  else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  auto b = [](bool x) { return x ? "true" : "false"; };
  out << "sparse_window = " << sparse_window << '\n'
      << "dense_window = " << dense_window << '\n'
      << "disparity_range = " << disparity_range << '\n'
      << "lr_check = " << b(lr_check) << '\n'
      << "downsample = " << downsample << '\n'
      << "consistency_radius = " << filter.consistency_radius << '\n'
      << "consistency_tolerance = " << filter.consistency_tolerance << '\n'
      << "consistency_min_neighbors = " << filter.min_consistent_neighbors << '\n'
      << "redundancy_distance = " << filter.redundancy_distance << '\n'
      << "redundancy_tolerance = " << filter.redundancy_tolerance << '\n'
      << "grid_size = " << prior.grid_size << '\n'
      << "grid_neighborhood = " << b(prior.grid_neighborhood) << '\n'
      << "median_radius = " << median_radius << '\n'
      << "lr_check_dense = " << b(lr_check_dense) << '\n'
      << "executor = " << to_string(executor) << '\n'
      << "frames_in_flight = " << frames_in_flight << '\n'
      << "stage_depth = " << stage_depth << '\n'
      << "isa = " << isa << '\n';
  return out.str();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace streamelas
