#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ped/kernels.hpp"

namespace ped {

using Vector = std::vector<double>;

// Dense column-major matrix; columns are contiguous so the per-column
// kernels (dot, axpy) run over unit-stride memory.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double norm2(std::span<const double> v) {
  return std::sqrt(kernels::sum_sq(v));
}

inline double norm1(std::span<const double> v) { return kernels::sum_abs(v); }

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// X * beta, accumulated column by column.
inline Vector matvec(const Matrix& X, std::span<const double> beta) {
  Vector y(X.rows(), 0.0);
  for (std::size_t j = 0; j < X.cols(); ++j) {
    if (beta[j] != 0.0) kernels::axpy(beta[j], X.col(j), y);
  }
  return y;
}

// X^T * r
inline Vector tmatvec(const Matrix& X, std::span<const double> r) {
  Vector out(X.cols());
  for (std::size_t j = 0; j < X.cols(); ++j) out[j] = kernels::dot(X.col(j), r);
  return out;
}

}  // namespace ped
