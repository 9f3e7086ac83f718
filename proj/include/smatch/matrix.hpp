#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smatch/error.hpp"

namespace smatch {

/// Dense row-major matrix of doubles. Rows are participants, columns are
/// attribute (or weight) coordinates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(data_.size() == rows_ * cols_, Errc::dimension_mismatch,
            "matrix buffer has " + std::to_string(data_.size()) + " entries, expected " +
                std::to_string(rows_ * cols_));
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix(0, 0);
    const std::size_t cols = rows.front().size();
    Matrix out(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      require(rows[r].size() == cols, Errc::dimension_mismatch,
              "ragged row " + std::to_string(r) + ": " + std::to_string(rows[r].size()) +
                  " entries, expected " + std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c) out(r, c) = rows[r][c];
    }
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
    return out;
  }

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Left-to-right dot product. Every component that compares values (the
/// brute oracle, the indexes, the pruning bounds) sums in this order so that
/// identical inputs produce bit-identical results.
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace smatch
