#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcr/matrix.hpp"

namespace bcr {

enum class ConstraintSense { kEq, kLe, kGe };

std::string to_string(ConstraintSense sense);
ConstraintSense sense_from_string(const std::string& s);

// One factored constraint: trace(X^T A X) with A = factor^T factor, so the
// constrained quantity is ||factor * X||_F^2 compared against `bound`.
struct FactoredConstraint {
  DenseMatrix factor;  // p-by-N
  double bound = 0.0;  // >= 0
  ConstraintSense sense = ConstraintSense::kEq;
  std::string label;
};

// The factored semidefinite program: minimize trace(X^T C X) over N-by-r X
// subject to the factored constraints.
struct SdpProblem {
  std::size_t dim = 0;   // N
  std::size_t rank = 0;  // r
  SymMatrix objective;   // C, N-by-N, PSD; empty or zero means C = 0
  std::vector<FactoredConstraint> constraints;

  bool objective_is_zero() const {
    return objective.empty() || objective.is_zero();
  }
  std::size_t num_equalities() const;

  // Throws NotPsdError / NegativeBoundError / RankOutOfRangeError /
  // ValidationError when an invariant fails.
  void validate() const;
};

enum class XUpdate { kClosedForm, kGradient };
enum class GeMode { kExteriorProjection, kHinge };
// Linear system solved in the closed-form X stage. kExact is the true
// minimizer of the X block: (2C + alpha*Sum L_i^T L_i) X = alpha*Sum L_i^T Q_i.
// kUnscaledC keeps C unscaled and drops alpha from the right-hand side,
// matching solvers that fold those factors into C.
enum class XSystem { kExact, kUnscaledC };
enum class ConfigStyle { kGeneral, kBqp, kMetric };

struct SolverConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_beta_ratio = 2.0;
  std::size_t max_iters = 1000;
  double rel_obj_tol = 1e-6;
  XUpdate x_update = XUpdate::kClosedForm;
  double grad_step = 0.0;  // <= 0 selects the automatic Lipschitz step
  GeMode ge_mode = GeMode::kExteriorProjection;
  double hinge_weight = 0.0;  // mu
  XSystem x_system = XSystem::kExact;
  std::vector<double> ridge_schedule = {0.0, 1e-10, 1e-8, 1e-6};
  std::uint64_t seed = 0;

  void validate() const;  // alpha > beta > 0, max_iters >= 1
};

struct SolveResult {
  DenseMatrix x;                      // N-by-r
  std::vector<DenseMatrix> q;         // per constraint, p_i-by-r
  std::vector<double> objective_trace;  // one entry per sweep
  std::size_t iterations = 0;
  bool converged = false;
  // Per-constraint violation: |value - b| for EQ, max(0, value - b) for LE,
  // max(0, b - value) for GE, where value = ||L_i X||_F^2.
  std::vector<double> feasibility;
  double wall_time_ms = 0.0;
  std::size_t zero_radius_constraints = 0;  // EQ constraints with b = 0
};

struct RawConstraint {
  SymMatrix matrix;
  double bound = 0.0;
  ConstraintSense sense = ConstraintSense::kEq;
  std::string label;
};

// Factors every raw constraint matrix (rejecting non-PSD input) and
// assembles a validated problem.
SdpProblem build_problem(const SymMatrix& objective,
                         const std::vector<RawConstraint>& raw_constraints,
                         std::size_t rank);

// Assembles a problem from pre-factored constraints and validates it.
SdpProblem make_problem(SymMatrix objective,
                        std::vector<FactoredConstraint> constraints,
                        std::size_t dim, std::size_t rank);

// Parameter defaults per problem family. Always returns alpha / beta = 2.
SolverConfig default_config(const SdpProblem& problem, ConfigStyle style);

// ||L_i X||_F^2 for one constraint.
double constraint_value(const FactoredConstraint& c, const DenseMatrix& x);
// Violation under the sense semantics documented on SolveResult.
double constraint_violation(const FactoredConstraint& c, double value);

}  // namespace bcr
