#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcr/matrix.hpp"
#include "bcr/model.hpp"

namespace bcr {
// Independent verification paths. Nothing here may call into the solver,
// rounding, or initializer modules.
namespace oracle {

struct BruteForceResult {
  std::vector<double> best_labels;  // +/-1
  double best_objective = 0.0;
  std::size_t num_feasible = 0;
};

struct BruteConstraint {
  DenseMatrix factor;
  double bound = 0.0;
  ConstraintSense sense = ConstraintSense::kEq;
};

// Exhaustive minimization of x^T cost x over x in {-1, +1}^N, optionally
// filtered by factored constraints evaluated at the rank-1 lift (tolerance
// 1e-9). Ties break to the lexicographically smallest labeling with -1 < +1.
// Throws TooLargeError for N > 22 and InfeasibleError when nothing passes.
BruteForceResult brute_force_bqp(
    const SymMatrix& cost,
    const std::vector<BruteConstraint>& constraints = {});

struct ConstraintReport {
  std::string label;
  ConstraintSense sense = ConstraintSense::kEq;
  double value = 0.0;   // ||L_i X||_F^2
  double bound = 0.0;
  double signed_violation = 0.0;  // value - b (EQ/LE), b - value (GE)
  double violation = 0.0;         // per the sense semantics
};

struct FeasibilityReport {
  std::vector<ConstraintReport> constraints;
  double max_violation = 0.0;
  bool feasible(double tol) const { return max_violation <= tol; }
};

// Direct re-evaluation of every constraint at X; no solver state consulted.
FeasibilityReport check_solution(const SdpProblem& problem,
                                 const DenseMatrix& x);

}  // namespace oracle
}  // namespace bcr
