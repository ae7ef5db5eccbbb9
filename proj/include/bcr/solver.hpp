#pragma once

#include <vector>

#include "bcr/initializer.hpp"
#include "bcr/linalg.hpp"
#include "bcr/matrix.hpp"
#include "bcr/model.hpp"

namespace bcr {

// Current iterate of the alternating minimization.
struct SolverState {
  DenseMatrix x;               // N-by-r
  std::vector<DenseMatrix> q;  // per constraint, p_i-by-r
  std::size_t sweep = 0;
  double last_objective = 0.0;
};

// Relaxed objective:
//   trace(X^T C X) + (alpha/2) Sum_i ||Q_i - L_i X||_F^2
//                  - (beta/2)  Sum_{i in EQ} ||Q_i||_F^2
// plus, in hinge mode, mu * Sum_{i in GE} max(0, b_i - ||Q_i||_F^2)^2.
double bcr_objective(const SdpProblem& problem, const SolverConfig& config,
                     const DenseMatrix& x, const std::vector<DenseMatrix>& q);

// Per-constraint block minimizers for Q given X (expansion-reprojection for
// EQ, projection for LE, exterior projection or hinge minimization for GE).
std::vector<DenseMatrix> update_Q(const SdpProblem& problem,
                                  const SolverConfig& config,
                                  const DenseMatrix& x);

// Exact minimizer of the X block through a precomputed SPD factorization of
// the stage system (see XSystem).
DenseMatrix update_X_closed(const SdpProblem& problem,
                            const SolverConfig& config,
                            const std::vector<DenseMatrix>& q,
                            const SpdFactor& factor);

// One gradient step on the X block. grad_step <= 0 selects
// 1 / (2||C||_2 + alpha * Sum_i ||L_i||_2^2).
DenseMatrix update_X_gradient(const SdpProblem& problem,
                              const SolverConfig& config, const DenseMatrix& x,
                              const std::vector<DenseMatrix>& q);

// Inverse Lipschitz step size used by update_X_gradient when grad_step <= 0.
double auto_gradient_step(const SdpProblem& problem,
                          const SolverConfig& config);

// System matrix of the closed-form X stage (before any ridge).
SymMatrix x_stage_system(const SdpProblem& problem, const SolverConfig& config);

// Factors the X-stage system, escalating through config.ridge_schedule
// (scaled by 1 + an estimate of the system spectral norm) until the
// factorization succeeds. Throws NotSpdError if every ridge fails.
SpdFactor factor_x_stage(const SdpProblem& problem,
                         const SolverConfig& config);

// Full alternating minimization: spectral initialization, precomputed
// factorization, Q/X sweeps until the relative objective change drops below
// config.rel_obj_tol or max_iters is reached.
SolveResult solve(const SdpProblem& problem, const SolverConfig& config);

}  // namespace bcr
