#include "bcr/model.hpp"

#include <algorithm>
#include <cmath>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"

namespace bcr {

std::string to_string(ConstraintSense sense) {
  switch (sense) {
    case ConstraintSense::kEq: return "eq";
    case ConstraintSense::kLe: return "le";
    case ConstraintSense::kGe: return "ge";
  }
  return "eq";
}

ConstraintSense sense_from_string(const std::string& s) {
  if (s == "eq") return ConstraintSense::kEq;
  if (s == "le") return ConstraintSense::kLe;
  if (s == "ge") return ConstraintSense::kGe;
  throw ValidationError("unknown constraint sense \"" + s + "\"");
}

std::size_t SdpProblem::num_equalities() const {
  std::size_t n = 0;
  for (const auto& c : constraints)
    if (c.sense == ConstraintSense::kEq) ++n;
  return n;
}

void SdpProblem::validate() const {
  if (rank < 1 || rank > dim) {
    throw RankOutOfRangeError("rank " + std::to_string(rank) +
                              " outside [1, " + std::to_string(dim) + "]");
  }
  if (constraints.empty()) {
    throw ValidationError("problem has no constraints");
  }
  if (!objective.empty()) {
    if (objective.size() != dim) {
      throw ValidationError("objective is " + std::to_string(objective.size()) +
                            "x" + std::to_string(objective.size()) +
                            " but dim = " + std::to_string(dim));
    }
    if (!objective.all_finite()) {
      throw ValidationError("objective has non-finite entries");
    }
    if (!objective.is_zero()) {
      const double lambda_min = min_eigenvalue(objective);
      const double lambda_max = spectral_norm(objective);
      if (lambda_min < -1e-8 * std::max(1.0, lambda_max)) {
        throw NotPsdError("objective min eigenvalue " +
                          std::to_string(lambda_min) + " fails PSD check");
      }
    }
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (c.bound < 0.0) {
      throw NegativeBoundError("constraint " + std::to_string(i) + " (" +
                               c.label + ") has bound " +
                               std::to_string(c.bound));
    }
    if (c.factor.cols() != dim) {
      throw ValidationError("constraint " + std::to_string(i) + " (" + c.label +
                            ") factor has " + std::to_string(c.factor.cols()) +
                            " columns, expected " + std::to_string(dim));
    }
    if (!c.factor.all_finite()) {
      throw ValidationError("constraint " + std::to_string(i) + " (" + c.label +
                            ") factor has non-finite entries");
    }
  }
}

void SolverConfig::validate() const {
  if (!(alpha > beta) || !(beta > 0.0)) {
    throw ValidationError("solver config requires alpha > beta > 0, got alpha=" +
                          std::to_string(alpha) + " beta=" +
                          std::to_string(beta));
  }
  if (max_iters < 1) {
    throw ValidationError("max_iters must be >= 1");
  }
}

SdpProblem build_problem(const SymMatrix& objective,
                         const std::vector<RawConstraint>& raw_constraints,
                         std::size_t rank) {
  const std::size_t dim = objective.size();
  std::vector<FactoredConstraint> factored;
  factored.reserve(raw_constraints.size());
  for (std::size_t i = 0; i < raw_constraints.size(); ++i) {
    const auto& rc = raw_constraints[i];
    if (rc.matrix.size() != dim) {
      throw ValidationError("constraint " + std::to_string(i) +
                            " matrix size mismatch");
    }
    if (rc.bound < 0.0) {
      throw NegativeBoundError("constraint " + std::to_string(i) + " (" +
                               rc.label + ") has bound " +
                               std::to_string(rc.bound));
    }
    DenseMatrix factor;
    try {
      factor = psd_sqrt_factor(rc.matrix);
    } catch (const NotPsdError& e) {
      throw NotPsdError("constraint " + std::to_string(i) + " (" + rc.label +
                        "): " + e.what());
    }
    factored.push_back({std::move(factor), rc.bound, rc.sense,
                        rc.label.empty() ? "c" + std::to_string(i) : rc.label});
  }
  return make_problem(objective, std::move(factored), dim, rank);
}

SdpProblem make_problem(SymMatrix objective,
                        std::vector<FactoredConstraint> constraints,
                        std::size_t dim, std::size_t rank) {
  SdpProblem p;
  p.dim = dim;
  p.rank = rank;
  p.objective = std::move(objective);
  p.constraints = std::move(constraints);
  p.validate();
  return p;
}

SolverConfig default_config(const SdpProblem& problem, ConfigStyle style) {
  SolverConfig cfg;
  switch (style) {
    case ConfigStyle::kGeneral: {
      // beta matches the curvature of the objective; any positive value
      // works for feasibility problems, so C = 0 falls back to 1.
      double beta = problem.objective_is_zero()
                        ? 1.0
                        : spectral_norm(problem.objective);
      if (beta <= 0.0) beta = 1.0;
      cfg.beta = beta;
      cfg.alpha = 2.0 * beta;
      cfg.hinge_weight = 0.5 * cfg.alpha;
      break;
    }
    case ConfigStyle::kBqp: {
      const double count =
          static_cast<double>(std::max<std::size_t>(1, problem.constraints.size()));
      cfg.beta = 5.0 / std::sqrt(count);
      cfg.alpha = 2.0 * cfg.beta;
      cfg.hinge_weight = 0.5 * cfg.alpha;
      break;
    }
    case ConfigStyle::kMetric: {
      std::size_t pairs = 0;
      for (const auto& c : problem.constraints) {
        if (c.sense != ConstraintSense::kEq) ++pairs;
      }
      const double count = static_cast<double>(std::max<std::size_t>(1, pairs));
      cfg.alpha = 1.0 / std::sqrt(count);
      cfg.beta = 0.5 * cfg.alpha;
      cfg.hinge_weight = 0.5 * cfg.alpha;  // mu = alpha / 2
      cfg.ge_mode = GeMode::kHinge;
      break;
    }
  }
  return cfg;
}

double constraint_value(const FactoredConstraint& c, const DenseMatrix& x) {
  return frobenius_norm_sq(matmul(c.factor, x));
}

double constraint_violation(const FactoredConstraint& c, double value) {
  switch (c.sense) {
    case ConstraintSense::kEq: return std::abs(value - c.bound);
    case ConstraintSense::kLe: return std::max(0.0, value - c.bound);
    case ConstraintSense::kGe: return std::max(0.0, c.bound - value);
  }
  return 0.0;
}

}  // namespace bcr
