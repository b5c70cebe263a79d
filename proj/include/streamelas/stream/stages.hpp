#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "streamelas/census.hpp"
#include "streamelas/dense.hpp"
#include "streamelas/filter.hpp"
#include "streamelas/pipeline.hpp"
#include "streamelas/prior.hpp"
#include "streamelas/sparse.hpp"
#include "streamelas/stream/line_buffer.hpp"

namespace streamelas::stream {

/// One output token per pixel position, in raster order.
struct CensusToken {
  Descriptor descriptor;
  bool valid = false;
};
using CensusPair = std::pair<CensusToken, CensusToken>;
using Candidate = std::optional<sparse::SupportPoint>;

/// Clocked stage skeleton. Each call to tick() is one step. Output k is
/// computed once input k + lookahead has arrived (or the input stream has
/// ended) and then travels through `depth` pipeline registers. After the
/// fill latency the stage emits exactly one token per step until every
/// pixel position has been emitted; a step without output in that window
/// is a contract violation and throws std::logic_error.
template <typename In, typename Out>
class ClockedStage {
 public:
  ClockedStage(std::string name, int width, int height, std::int64_t lookahead, int depth)
      : name_(std::move(name)),
        width_(width),
        height_(height),
        pixels_(static_cast<std::int64_t>(width) * height),
        lookahead_(lookahead),
        depth_(depth) {}
  virtual ~ClockedStage() = default;

  std::optional<Out> tick(const std::optional<In>& in) {
    if (in) {
      if (received_ == pixels_) throw std::logic_error(name_ + ": input past end of frame");
      if (received_ == 0) first_input_step_ = step_;
      consume(received_, *in);
      ++received_;
    }
    const bool upstream_done = received_ == pixels_;
    if (computed_ < pixels_ && (in || upstream_done) &&
        received_ >= std::min(pixels_, computed_ + 1 + lookahead_)) {
      registers_.push_back(compute(computed_));
      ++computed_;
    }
    std::optional<Out> out;
    if (!registers_.empty() &&
        (static_cast<int>(registers_.size()) > depth_ || computed_ == pixels_)) {
      out = std::move(registers_.front());
      registers_.pop_front();
      if (emitted_ == 0) first_output_step_ = step_;
      ++emitted_;
      last_output_step_ = step_;
    } else if (emitted_ > 0 && emitted_ < pixels_) {
      throw std::logic_error(name_ + ": missed an output step after fill");
    }
    ++step_;
    return out;
  }

  bool done() const noexcept { return emitted_ == pixels_; }
  std::int64_t emitted() const noexcept { return emitted_; }

  /// Fill latency predicted from buffer geometry plus register depth.
  std::int64_t expected_fill() const noexcept {
    return std::min(lookahead_, pixels_ - 1) + depth_;
  }

  StageStats stats() const {
    StageStats s;
    s.stage = name_;
    s.fill_latency_steps = first_output_step_ - first_input_step_;
    s.active_steps = last_output_step_ - first_input_step_ + 1;
    s.outputs = emitted_;
    s.peak_resident_rows = peak_rows();
    return s;
  }

 protected:
  virtual void consume(std::int64_t index, const In& in) = 0;
  virtual Out compute(std::int64_t index) = 0;
  virtual int peak_rows() const { return 0; }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::int64_t received() const noexcept { return received_; }

 private:
  std::string name_;
  int width_;
  int height_;
  std::int64_t pixels_;
  std::int64_t lookahead_;
  int depth_;
  std::int64_t step_ = 0;
  std::int64_t received_ = 0;
  std::int64_t computed_ = 0;
  std::int64_t emitted_ = 0;
  std::int64_t first_input_step_ = 0;
  std::int64_t first_output_step_ = 0;
  std::int64_t last_output_step_ = 0;
  std::deque<Out> registers_;
};

/// Census over a raster pixel stream using 2W line buffers and a W x W
/// window buffer. The window completes for centre k when pixel
/// k + (W/2) * width + W/2 arrives.
class CensusStage final : public ClockedStage<std::uint8_t, CensusToken> {
 public:
  CensusStage(std::string name, int width, int height, census::CensusConfig cfg, int depth);

 private:
  void consume(std::int64_t index, const std::uint8_t& px) override;
  CensusToken compute(std::int64_t index) override;
  int peak_rows() const override { return peak_rows_; }

  census::CensusConfig cfg_;
  LineBufferBank<std::uint8_t> lines_;
  WindowBuffer<std::uint8_t> window_;
  std::vector<std::uint8_t> column_;
  int peak_rows_ = 0;
};

/// Keeps the last D (+ D - 1 look-ahead with the left-right check)
/// descriptor pairs of the current position and runs the ambiguity test.
/// Downsampling is fused here so the candidate stream is already decimated.
class SparseStage final : public ClockedStage<CensusPair, Candidate> {
 public:
  SparseStage(int width, int height, int census_radius, const sparse::SparseConfig& cfg, int depth);

 private:
  void consume(std::int64_t index, const CensusPair& in) override;
  Candidate compute(std::int64_t index) override;
  const CensusPair& slot(std::int64_t index) const { return ring_[index % ring_.size()]; }

  int radius_;
  sparse::SparseConfig cfg_;
  sparse::Stride stride_;
  std::vector<CensusPair> ring_;
  std::vector<std::uint16_t> costs_;
};

/// Consistency over a ring of 2R_c + 2 candidate rows (decision for pixel k
/// waits until k + R_c * width + R_c has arrived) followed by the
/// backwards-only redundancy scan.
class FilterStage final : public ClockedStage<Candidate, Candidate> {
 public:
  FilterStage(int width, int height, const filter::FilterConfig& cfg, int depth);

 private:
  void consume(std::int64_t index, const Candidate& in) override;
  Candidate compute(std::int64_t index) override;
  int peak_rows() const override { return ring_rows_; }
  std::int16_t& cell(int u, int v) {
    return rows_[static_cast<std::size_t>(v % ring_rows_) * width() + u];
  }

  filter::FilterConfig cfg_;
  int ring_rows_;
  std::vector<std::int16_t> rows_;
  filter::BackwardRedundancy redundancy_;
};

/// Dense winner-take-all. Candidate sets are read from the prior field in
/// the same raster order as the descriptors arrive.
class DenseStage final : public ClockedStage<CensusPair, std::uint16_t> {
 public:
  DenseStage(int width, int height, int census_radius, const dense::DenseConfig& cfg,
             const prior::PriorField& priors, int depth);

 private:
  void consume(std::int64_t index, const CensusPair& in) override;
  std::uint16_t compute(std::int64_t index) override;
  const CensusPair& slot(std::int64_t index) const { return ring_[index % ring_.size()]; }

  int radius_;
  dense::DenseConfig cfg_;
  const prior::PriorField& priors_;
  std::vector<CensusPair> ring_;
  std::vector<std::uint16_t> costs_;
};

}  // namespace streamelas::stream
