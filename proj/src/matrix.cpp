#include "schurss/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace schurss {

Matrix::Matrix(std::size_t rows, std::size_t cols, Vec data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ == 0 || cols_ == 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data length does not match rows*cols");
  }
  if (!all_finite()) {
    throw NumericError("matrix contains non-finite elements");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("ragged initializer for matrix");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) {
    throw NumericError("matrix contains non-finite elements");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DimensionError("matrix addition shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DimensionError("matrix subtraction shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matmul shape mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = &b.data_[k * b.cols_];
      double* crow = &c.data_[i * c.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw DimensionError("matmul_tn shape mismatch");
  Matrix c(a.cols_, b.cols_);
  for (std::size_t k = 0; k < a.rows_; ++k) {
    const double* arow = &a.data_[k * a.cols_];
    const double* brow = &b.data_[k * b.cols_];
    for (std::size_t i = 0; i < a.cols_; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* crow = &c.data_[i * c.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw DimensionError("matmul_nt shape mismatch");
  Matrix c(a.rows_, b.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    const double* arow = &a.data_[i * a.cols_];
    for (std::size_t j = 0; j < b.rows_; ++j) {
      const double* brow = &b.data_[j * b.cols_];
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols_; ++k) s += arow[k] * brow[k];
      c(i, j) = s;
    }
  }
  return c;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = &data_[i * cols_];
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec Matrix::apply_transposed(const Vec& x) const {
  if (x.size() != rows_) throw DimensionError("matrix-vector shape mismatch");
  Vec y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = &data_[i * cols_];
    const double xi = x[i];
    for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
  }
  return y;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double frobenius_dist_sq(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius distance shape mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const double d = a.data()[k] - b.data()[k];
    s += d * d;
  }
  return s;
}

double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Matrix add_scaled_identity(const Matrix& a, double shift) {
  if (!a.is_square()) throw DimensionError("shift requires a square matrix");
  Matrix m = a;
  for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) += shift;
  return m;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (!a.is_square()) throw DimensionError("solve requires a square matrix");
  if (a.rows() != b.rows()) throw DimensionError("solve shape mismatch");
  const std::size_t n = a.rows(), m = b.cols();
  Matrix lu = a;
  Matrix x = b;
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    }
    if (std::abs(lu(p, k)) < 1e-300) {
      throw SingularityError("solve: singular matrix (pivot " + std::to_string(k) + ")");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(p, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x(ii, j);
      for (std::size_t k = ii + 1; k < n; ++k) s -= lu(ii, k) * x(k, j);
      x(ii, j) = s / lu(ii, ii);
    }
  }
  return x;
}

Vec solve(const Matrix& a, const Vec& b) {
  Matrix rhs(b.size(), 1, b);
  Matrix x = solve(a, rhs);
  return x.data();
}

}  // namespace schurss
