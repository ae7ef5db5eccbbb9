#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bcr {

// Dense real matrix, row-major, value semantics. Shapes are fixed at
// construction; entries are mutable.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Dense real symmetric matrix, full n-by-n row-major storage. Construction
// paths that accept arbitrary data validate symmetry; in-library producers
// write both triangles exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  static SymMatrix identity(std::size_t n);
  // Validates |values[i,j] - values[j,i]| <= tol * (1 + max|values|),
  // then symmetrizes exactly. Throws ValidationError.
  static SymMatrix from_dense(const DenseMatrix& m, double tol = 1e-10);

  std::size_t size() const { return n_; }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * n_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }

  DenseMatrix as_dense() const;
  bool all_finite() const;
  bool is_zero() const;

  bool operator==(const SymMatrix& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// ---- Basic operations (deterministic accumulation order) ----

// A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// A^T * B
DenseMatrix transpose_times(const DenseMatrix& a, const DenseMatrix& b);
// Allocation-free variants for hot loops; `out` must be pre-shaped.
void matmul_into(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void transpose_times_into(const DenseMatrix& a, const DenseMatrix& b,
                          DenseMatrix& out);
void sym_times_into(const SymMatrix& m, const DenseMatrix& x,
                    DenseMatrix& out);
DenseMatrix transpose(const DenseMatrix& a);
// A^T * A as a symmetric matrix
SymMatrix gram(const DenseMatrix& a);
// M * X for symmetric M
DenseMatrix sym_times(const SymMatrix& m, const DenseMatrix& x);

DenseMatrix scaled(const DenseMatrix& a, double s);
DenseMatrix sum(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix difference(const DenseMatrix& a, const DenseMatrix& b);
SymMatrix sym_sum(const SymMatrix& a, const SymMatrix& b);
SymMatrix sym_scaled(const SymMatrix& a, double s);

double frobenius_norm_sq(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);
double frobenius_norm(const SymMatrix& a);
double max_abs(const SymMatrix& a);
double max_abs(const DenseMatrix& a);

// trace(X^T M X) for symmetric M
double quadratic_trace(const SymMatrix& m, const DenseMatrix& x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace bcr
