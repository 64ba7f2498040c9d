#include "qtopos/matrix.hpp"

#include <stdexcept>

#include "qtopos/error.hpp"

namespace qtopos {

ExactMatrix::ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  ExactMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("row length differs from column count");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
  ExactMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw DimensionMismatch("column length differs from row count");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vector ExactMatrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector ExactMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool ExactMatrix::is_zero() const {
  for (const auto& z : data_)
    if (!z.is_zero()) return false;
  return true;
}

std::string ExactMatrix::key() const {
  std::string k = std::to_string(rows_) + "x" + std::to_string(cols_) + ":";
  for (const auto& z : data_) {
    k += z.to_string();
    k += ';';
  }
  return k;
}

RrefResult rref(const ExactMatrix& input) {
  ExactMatrix m = input;
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t p = lead_row;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != lead_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(lead_row, k));
    GaussianRational inv = m(lead_row, c).inverse();
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c).is_zero()) continue;
      GaussianRational f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(r, k) -= f * m(lead_row, k);
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const ExactMatrix& m) { return rref(m).rank(); }

std::vector<Vector> kernel_basis(const ExactMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.form(i, free);
    basis.push_back(normalize_leading(std::move(v)));
  }
  return basis;
}

ExactMatrix mat_mul(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("mat_mul: " + std::to_string(a.cols()) + " columns vs " +
                            std::to_string(b.rows()) + " rows");
  ExactMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

Vector mat_vec(const ExactMatrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("mat_vec: length mismatch");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!a(i, k).is_zero() && !v[k].is_zero()) out[i] += a(i, k) * v[k];
  return out;
}

ExactMatrix mat_add(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("mat_add: shape mismatch");
  ExactMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

ExactMatrix mat_sub(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("mat_sub: shape mismatch");
  ExactMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

ExactMatrix conj_transpose(const ExactMatrix& m) {
  ExactMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j).conj();
  return out;
}

ExactMatrix inverse(const ExactMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows();
  ExactMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RrefResult r = rref(aug);
  if (r.rank() < n || r.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  ExactMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = r.form(i, n + j);
  return out;
}

Vector normalize_leading(Vector v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    GaussianRational inv = v[i].inverse();
    for (std::size_t k = i; k < v.size(); ++k) v[k] *= inv;
    break;
  }
  return v;
}

GaussianRational inner(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner product length mismatch");
  GaussianRational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].conj() * b[i];
  return s;
}

std::string vector_to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

}  // namespace qtopos
