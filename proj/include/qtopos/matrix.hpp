#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qtopos/gaussian.hpp"

namespace qtopos {

using Vector = std::vector<GaussianRational>;

/// Dense row-major matrix over the Gaussian rationals.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> rows);

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ExactMatrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
  static ExactMatrix from_columns(const std::vector<Vector>& cols, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  GaussianRational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const GaussianRational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;

  bool is_zero() const;
  bool is_square() const noexcept { return rows_ == cols_; }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

  /// Stable textual key; equal matrices give equal keys.
  std::string key() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussianRational> data_;
};

struct RrefResult {
  ExactMatrix form;
  std::vector<std::size_t> pivots;
  std::size_t rank() const noexcept { return pivots.size(); }
};

/// Unique reduced row echelon form with its pivot columns.
RrefResult rref(const ExactMatrix& m);

std::size_t rank(const ExactMatrix& m);

/// Null-space basis; the first nonzero coordinate of each vector is 1.
std::vector<Vector> kernel_basis(const ExactMatrix& m);

ExactMatrix mat_mul(const ExactMatrix& a, const ExactMatrix& b);
Vector mat_vec(const ExactMatrix& a, const Vector& v);
ExactMatrix mat_add(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix mat_sub(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix conj_transpose(const ExactMatrix& m);

/// Inverse of a square matrix; throws std::domain_error when singular.
ExactMatrix inverse(const ExactMatrix& m);

/// Scales v so its first nonzero entry is 1 (zero vectors are returned unchanged).
Vector normalize_leading(Vector v);

/// Hermitian inner product <a, b> = sum conj(a_i) b_i.
GaussianRational inner(const Vector& a, const Vector& b);

std::string vector_to_string(const Vector& v);

}  // namespace qtopos
