#include "bcr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bcr/errors.hpp"

namespace bcr {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ValidationError("DenseMatrix: value count " +
                          std::to_string(values_.size()) + " != " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::from_dense(const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("SymMatrix: matrix is " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()) + ", not square");
  }
  const std::size_t n = m.rows();
  const double scale = 1.0 + max_abs(m);
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) {
        throw ValidationError("SymMatrix: asymmetry at (" + std::to_string(i) +
                              "," + std::to_string(j) + ") exceeds tolerance");
      }
      const double v = 0.5 * (m(i, j) + m(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

DenseMatrix SymMatrix::as_dense() const {
  return DenseMatrix(n_, n_, values_);
}

bool SymMatrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool SymMatrix::is_zero() const {
  for (double v : values_) {
    if (v != 0.0) return false;
  }
  return true;
}

void matmul_into(const DenseMatrix& a, const DenseMatrix& b,
                 DenseMatrix& out) {
  if (a.cols() != b.rows() || out.rows() != a.rows() ||
      out.cols() != b.cols()) {
    throw ValidationError("matmul_into: shape mismatch");
  }
  std::fill(out.data(), out.data() + out.rows() * out.cols(), 0.0);
  // i-k-j order: row of b streams through cache, accumulation order fixed.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = out.data() + i * out.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.data() + k * b.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  matmul_into(a, b, c);
  return c;
}

void transpose_times_into(const DenseMatrix& a, const DenseMatrix& b,
                          DenseMatrix& out) {
  if (a.rows() != b.rows() || out.rows() != a.cols() ||
      out.cols() != b.cols()) {
    throw ValidationError("transpose_times_into: shape mismatch");
  }
  std::fill(out.data(), out.data() + out.rows() * out.cols(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.data() + k * a.cols();
    const double* bk = b.data() + k * b.cols();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = out.data() + i * out.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
    }
  }
}

DenseMatrix transpose_times(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.cols(), b.cols());
  transpose_times_into(a, b, c);
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

SymMatrix gram(const DenseMatrix& a) {
  const std::size_t n = a.cols();
  SymMatrix g(n);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* gi = g.data() + i * n;
      for (std::size_t j = i; j < n; ++j) gi[j] += aki * ak[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

void sym_times_into(const SymMatrix& m, const DenseMatrix& x,
                    DenseMatrix& out) {
  if (m.size() != x.rows() || out.rows() != m.size() ||
      out.cols() != x.cols()) {
    throw ValidationError("sym_times_into: shape mismatch");
  }
  std::fill(out.data(), out.data() + out.rows() * out.cols(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double* ci = out.data() + i * out.cols();
    const double* mi = m.data() + i * m.size();
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double mik = mi[k];
      if (mik == 0.0) continue;
      const double* xk = x.data() + k * x.cols();
      for (std::size_t j = 0; j < x.cols(); ++j) ci[j] += mik * xk[j];
    }
  }
}

DenseMatrix sym_times(const SymMatrix& m, const DenseMatrix& x) {
  DenseMatrix c(m.size(), x.cols());
  sym_times_into(m, x, c);
  return c;
}

DenseMatrix scaled(const DenseMatrix& a, double s) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) *= s;
  return c;
}

DenseMatrix sum(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("sum: shape mismatch");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

DenseMatrix difference(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("difference: shape mismatch");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

SymMatrix sym_sum(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) {
    throw ValidationError("sym_sum: size mismatch");
  }
  SymMatrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) c(i, j) += b(i, j);
  return c;
}

SymMatrix sym_scaled(const SymMatrix& a, double s) {
  SymMatrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) c(i, j) *= s;
  return c;
}

double frobenius_norm_sq(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return s;
}

double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(frobenius_norm_sq(a));
}

double frobenius_norm(const SymMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const SymMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double quadratic_trace(const SymMatrix& m, const DenseMatrix& x) {
  if (m.size() != x.rows()) {
    throw ValidationError("quadratic_trace: dimension mismatch");
  }
  const DenseMatrix mx = sym_times(m, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s += x(i, j) * mx(i, j);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  return std::sqrt(dot(v, v));
}

}  // namespace bcr
