#pragma once

#include "bcr/matrix.hpp"
#include "bcr/model.hpp"

namespace bcr {

struct InitReport {
  DenseMatrix x0;                 // N-by-r
  double leading_eigenvalue = 0.0;
  std::size_t used_equalities = 0;
  bool fallback_used = false;
};

// Mean of b_i * L_i^T L_i over the equality constraints. Throws
// NoEqualityConstraintsError when the problem has none.
SymMatrix build_Z(const SdpProblem& problem);

// Spectral initializer: factor C + eps*I = U^T U, whiten Z through U, take
// the leading-r eigenvectors scaled by the leading eigenvalue, and map back
// through U^{-1}. Falls back to a seeded random iterate (norm matched to the
// mean bound) when there is nothing to spectrally initialize from; the
// fallback is flagged, never an error.
InitReport initialize(const SdpProblem& problem, const SolverConfig& config);

}  // namespace bcr
