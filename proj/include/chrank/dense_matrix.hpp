#pragma once

#include <cstdint>
#include <vector>

namespace chrank {

/// Row-major dense matrix, zero-initialized.
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  T& operator()(std::int64_t r, std::int64_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::int64_t r, std::int64_t c) const {
    return data_[r * cols_ + c];
  }

  T* row_ptr(std::int64_t r) { return data_.data() + r * cols_; }
  const T* row_ptr(std::int64_t r) const { return data_.data() + r * cols_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace chrank
