#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace streamelas::stream {

/// Stack of `rows` line buffers, each one image row wide. Pushing a value
/// at column c moves every buffer's entry at c up by one row, drops the top
/// entry and stores the new value in the bottom buffer, so column c always
/// holds that column's most recent `rows` pixels.
template <typename T>
class LineBufferBank {
 public:
  LineBufferBank(int rows, int width)
      : rows_(rows), width_(width), data_(static_cast<std::size_t>(rows) * width) {}

  int rows() const noexcept { return rows_; }
  int width() const noexcept { return width_; }

  void push(int column, const T& value) {
    for (int r = 0; r + 1 < rows_; ++r) cell(r, column) = cell(r + 1, column);
    cell(rows_ - 1, column) = value;
    if (column == 0) ++rows_started_;
  }

  /// Value `age` rows above the newest entry of `column` (age 0 is newest).
  const T& recent(int column, int age) const noexcept {
    assert(age < rows_);
    return data_[static_cast<std::size_t>(rows_ - 1 - age) * width_ + column];
  }

  /// Image rows currently held, never more than rows().
  int resident_rows() const noexcept { return rows_started_ < rows_ ? rows_started_ : rows_; }

 private:
  T& cell(int r, int c) noexcept { return data_[static_cast<std::size_t>(r) * width_ + c]; }

  int rows_;
  int width_;
  int rows_started_ = 0;
  std::vector<T> data_;
};

/// W x W register grid. Each step shifts every column one place left and
/// loads a fresh rightmost column.
template <typename T>
class WindowBuffer {
 public:
  explicit WindowBuffer(int size)
      : size_(size), regs_(static_cast<std::size_t>(size) * size) {}

  int size() const noexcept { return size_; }

  /// `column` lists the new rightmost column from top to bottom.
  void shift_in(std::span<const T> column) {
    assert(static_cast<int>(column.size()) == size_);
    for (int y = 0; y < size_; ++y) {
      T* row = &regs_[static_cast<std::size_t>(y) * size_];
      for (int x = 0; x + 1 < size_; ++x) row[x] = row[x + 1];
      row[size_ - 1] = column[y];
    }
  }

  const T& at(int x, int y) const noexcept { return regs_[static_cast<std::size_t>(y) * size_ + x]; }

 private:
  int size_;
  std::vector<T> regs_;
};

}  // namespace streamelas::stream
