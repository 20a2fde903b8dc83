#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace schurss {

// Error taxonomy shared across the library. The CLI maps these onto its
// exit codes (dimension/domain/structure -> usage, convergence -> 3, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration budget exhausted before the requested tolerance was reached.
// `residual` carries the best error estimate; `active_size` is nonzero for
// partially deflated factorizations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, std::size_t active_size = 0)
      : std::runtime_error(what), residual(residual), active_size(active_size) {}
  double residual;
  std::size_t active_size;
};

using Vec = std::vector<double>;

// Dense real matrix, row-major, double precision. Values are immutable in
// spirit: every operation returns a fresh matrix, mutation is limited to
// element writes on matrices the caller owns.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  // Validates shape and finiteness (no NaN/Inf admitted from external data).
  Matrix(std::size_t rows, std::size_t cols, Vec data);
  // Row-by-row brace construction for tests and small fixtures.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const Vec& data() const { return data_; }
  Vec& data() { return data_; }

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix m, double s) { return m *= s; }
  friend Matrix operator*(double s, Matrix m) { return m *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

  friend Matrix matmul(const Matrix& a, const Matrix& b);
  // a^T * b and a * b^T without forming the transpose.
  friend Matrix matmul_tn(const Matrix& a, const Matrix& b);
  friend Matrix matmul_nt(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Vec apply(const Vec& x) const;            // A x
  Vec apply_transposed(const Vec& x) const;  // A^T x

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  Vec data_;
};

double frobenius_dist_sq(const Matrix& a, const Matrix& b);

// Euclidean helpers for plain vectors.
double norm2(const Vec& x);
double dot(const Vec& x, const Vec& y);

// (A - I)-style shifts used all over the projection code.
Matrix add_scaled_identity(const Matrix& a, double shift);

// Solves a x = b by Gaussian elimination with partial pivoting.
// Throws SingularityError when a pivot underflows.
Vec solve(const Matrix& a, const Vec& b);
Matrix solve(const Matrix& a, const Matrix& b);

}  // namespace schurss
