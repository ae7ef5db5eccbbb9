#pragma once

#include <cstdint>
#include <vector>

#include "bcr/matrix.hpp"

namespace bcr {

struct Labeling {
  std::vector<double> labels;  // entries exactly -1 or +1
  double objective = 0.0;      // x^T cost x
};

// Leading left singular vector of X scaled by its singular value, computed
// from the r-by-r Gram without forming X X^T. Throws ZeroMatrixError when
// ||X||_F = 0.
std::vector<double> score_vector(const DenseMatrix& x);

// Elementwise sign with ties (zero) mapped to +1; objective evaluated
// against `cost`.
Labeling sign_round(const std::vector<double>& score, const SymMatrix& cost);

// Best of `trials` random-hyperplane candidates sign(X g), g standard
// normal, plus the spectral candidate sign_round(score_vector(X)). Ties keep
// the earliest candidate; the spectral candidate is evaluated first.
Labeling hyperplane_round(const DenseMatrix& x, const SymMatrix& cost,
                          std::size_t trials, std::uint64_t seed);

double labeling_objective(const std::vector<double>& labels,
                          const SymMatrix& cost);

}  // namespace bcr
