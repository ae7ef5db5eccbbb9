#include "bcr/oracle.hpp"

#include <cmath>

#include "bcr/errors.hpp"

namespace bcr {
namespace oracle {

namespace {

double quad_form(const std::vector<double>& x, const SymMatrix& cost) {
  const std::size_t n = x.size();
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ci = cost.data() + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += ci[j] * x[j];
    obj += x[i] * s;
  }
  return obj;
}

bool passes(const std::vector<double>& x,
            const std::vector<BruteConstraint>& constraints, double tol) {
  for (const auto& c : constraints) {
    double value = 0.0;
    for (std::size_t i = 0; i < c.factor.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < c.factor.cols(); ++j)
        s += c.factor(i, j) * x[j];
      value += s * s;
    }
    switch (c.sense) {
      case ConstraintSense::kEq:
        if (std::abs(value - c.bound) > tol) return false;
        break;
      case ConstraintSense::kLe:
        if (value > c.bound + tol) return false;
        break;
      case ConstraintSense::kGe:
        if (value < c.bound - tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

BruteForceResult brute_force_bqp(
    const SymMatrix& cost, const std::vector<BruteConstraint>& constraints) {
  const std::size_t n = cost.size();
  if (n > 22) {
    throw TooLargeError("brute_force_bqp: N = " + std::to_string(n) +
                        " exceeds the 22-bit enumeration cap");
  }
  constexpr double kTol = 1e-9;

  BruteForceResult result;
  bool have_best = false;
  std::vector<double> x(n);
  const std::uint64_t total = 1ULL << n;
  // mask order equals lexicographic order on labelings with -1 < +1 and
  // labels[0] most significant, so the first strict minimum encountered is
  // the lexicographically smallest optimizer.
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = (mask >> (n - 1 - i)) & 1ULL ? 1.0 : -1.0;
    }
    if (!constraints.empty() && !passes(x, constraints, kTol)) continue;
    ++result.num_feasible;
    const double obj = quad_form(x, cost);
    if (!have_best || obj < result.best_objective) {
      have_best = true;
      result.best_objective = obj;
      result.best_labels = x;
    }
  }
  if (!have_best) {
    throw InfeasibleError("brute_force_bqp: no labeling satisfies the constraints");
  }
  return result;
}

FeasibilityReport check_solution(const SdpProblem& problem,
                                 const DenseMatrix& x) {
  FeasibilityReport report;
  report.constraints.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) {
    ConstraintReport r;
    r.label = c.label;
    r.sense = c.sense;
    r.bound = c.bound;
    // ||L X||_F^2, accumulated row by row.
    double value = 0.0;
    for (std::size_t i = 0; i < c.factor.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < c.factor.cols(); ++k)
          s += c.factor(i, k) * x(k, j);
        value += s * s;
      }
    }
    r.value = value;
    r.signed_violation =
        c.sense == ConstraintSense::kGe ? c.bound - value : value - c.bound;
    switch (c.sense) {
      case ConstraintSense::kEq:
        r.violation = std::abs(value - c.bound);
        break;
      case ConstraintSense::kLe:
        r.violation = std::max(0.0, value - c.bound);
        break;
      case ConstraintSense::kGe:
        r.violation = std::max(0.0, c.bound - value);
        break;
    }
    report.max_violation = std::max(report.max_violation, r.violation);
    report.constraints.push_back(std::move(r));
  }
  return report;
}

}  // namespace oracle
}  // namespace bcr
