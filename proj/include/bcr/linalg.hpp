#pragma once

#include <cstddef>
#include <vector>

#include "bcr/matrix.hpp"

namespace bcr {

// One symmetric eigenpair. The vector has unit 2-norm and its
// largest-magnitude entry is non-negative (first such index on ties).
struct EigPair {
  double value = 0.0;
  std::vector<double> vector;
};

struct TopKEig {
  std::vector<EigPair> pairs;  // descending eigenvalue
  bool converged = true;       // false if any pair missed the residual bound
};

// Leading k eigenpairs by algebraic value, via power iteration on the
// diagonally shifted matrix with Hotelling deflation. Deterministic: the
// start vector is the normalized all-ones vector, re-seeded with a fixed
// pseudo-random perturbation only when that start is numerically orthogonal
// to the dominant eigenspace. Never throws on non-convergence; the best
// iterate is returned with converged = false.
TopKEig sym_eig_top_k(const SymMatrix& m, std::size_t k, double tol = 1e-10,
                      std::size_t max_iters = 20000);

struct JacobiEigen {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // columns, matching order, sign-convention
  bool converged = true;
};

// Full symmetric eigendecomposition by cyclic Jacobi rotations.
JacobiEigen jacobi_eigen(const SymMatrix& m, double tol = 1e-14,
                         std::size_t max_sweeps = 64);

// Real factor L with L^T L = A for PSD A, shape p-by-n where p is the
// numerical rank. Eigenvalues below clamp_tol * lambda_max are clamped to
// zero and dropped; an eigenvalue below -clamp_tol * max(1, lambda_max)
// throws NotPsdError. Rows are ordered by descending eigenvalue.
DenseMatrix psd_sqrt_factor(const SymMatrix& a, double clamp_tol = 1e-10);

// max |eigenvalue|, via power iteration on M^2 with a Jacobi fallback when
// the iteration stalls. Zero matrix yields 0.
double spectral_norm(const SymMatrix& m, double tol = 1e-9);

// Smallest algebraic eigenvalue, via power iteration on sigma*I - M.
double min_eigenvalue(const SymMatrix& m, double tol = 1e-9);

// Cholesky factorization M + ridge*I = U^T U with U upper triangular.
// Construction throws NotSpdError unless the shifted matrix is positive
// definite.
class SpdFactor {
 public:
  SpdFactor() = default;

  std::size_t size() const { return upper_.rows(); }
  const DenseMatrix& upper() const { return upper_; }

  // Solves (U^T U) W = B.
  DenseMatrix apply(const DenseMatrix& b) const;
  // Solves (U^T U) W = B overwriting B with W.
  void apply_in_place(DenseMatrix& b) const;
  // Solves U X = B (back substitution).
  DenseMatrix solve_upper(const DenseMatrix& b) const;
  // Solves U^T X = B (forward substitution).
  DenseMatrix solve_lower_t(const DenseMatrix& b) const;

  friend SpdFactor factor_spd(const SymMatrix& m, double ridge);

 private:
  DenseMatrix upper_;
};

SpdFactor factor_spd(const SymMatrix& m, double ridge = 0.0);

}  // namespace bcr
