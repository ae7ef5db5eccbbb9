#pragma once

// Test-only reference eigensolver, written independently of the library
// implementation so residual and spectrum checks do not share a code path
// with the code under test.

#include <cstddef>
#include <vector>

#include "bcr/matrix.hpp"

namespace testsupport {

struct OracleEigen {
  std::vector<double> values;               // descending
  std::vector<std::vector<double>> vectors; // vectors[k] matches values[k]
};

// Classic Jacobi sweeps on a copy of the full matrix; rotations applied
// until every off-diagonal entry is below 1e-13 * scale.
OracleEigen oracle_eigen(const bcr::SymMatrix& m);

double oracle_spectral_norm(const bcr::SymMatrix& m);
double oracle_min_eigenvalue(const bcr::SymMatrix& m);

}  // namespace testsupport
