#include "bcr/initializer.hpp"

#include <algorithm>
#include <cmath>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"
#include "bcr/rng.hpp"

namespace bcr {

namespace {

InitReport random_fallback(const SdpProblem& problem,
                           const SolverConfig& config) {
  InitReport report;
  report.fallback_used = true;
  Rng rng(config.seed);
  DenseMatrix g = rng.normal_matrix(problem.dim, problem.rank);
  double mean_b = 0.0;
  for (const auto& c : problem.constraints) mean_b += c.bound;
  mean_b /= static_cast<double>(problem.constraints.size());
  const double gn = frobenius_norm(g);
  const double target = mean_b > 0.0 ? std::sqrt(mean_b) : 0.0;
  report.x0 = gn > 0.0 ? scaled(g, target / gn) : std::move(g);
  return report;
}

}  // namespace

SymMatrix build_Z(const SdpProblem& problem) {
  std::size_t used = 0;
  SymMatrix z(problem.dim);
  for (const auto& c : problem.constraints) {
    if (c.sense != ConstraintSense::kEq) continue;
    ++used;
    if (c.bound == 0.0) continue;  // zero term
    const SymMatrix g = gram(c.factor);
    for (std::size_t i = 0; i < problem.dim; ++i)
      for (std::size_t j = 0; j < problem.dim; ++j)
        z(i, j) += c.bound * g(i, j);
  }
  if (used == 0) {
    throw NoEqualityConstraintsError(
        "build_Z: problem has no equality constraints");
  }
  const double inv = 1.0 / static_cast<double>(used);
  for (std::size_t i = 0; i < problem.dim; ++i)
    for (std::size_t j = 0; j < problem.dim; ++j) z(i, j) *= inv;
  return z;
}

InitReport initialize(const SdpProblem& problem, const SolverConfig& config) {
  const std::size_t n = problem.dim;
  const std::size_t r = problem.rank;

  if (problem.num_equalities() == 0) {
    return random_fallback(problem, config);
  }

  SymMatrix z = build_Z(problem);
  if (z.is_zero()) {
    // All equality bounds are zero; the spectral direction is undefined and
    // X = 0 would be a stationary point, so use the seeded iterate instead.
    return random_fallback(problem, config);
  }

  // C + eps*I = U^T U. eps keeps the factorization defined for singular or
  // zero objectives.
  const double c_norm =
      problem.objective_is_zero() ? 0.0 : spectral_norm(problem.objective);
  const double eps = 1e-6 * std::max(1.0, c_norm);
  SymMatrix shifted = problem.objective.empty() ? SymMatrix(n)
                                                : problem.objective;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += eps;
  const SpdFactor u = factor_spd(shifted);

  // Z_tilde = U^{-T} Z U^{-1}, applied as two triangular solves.
  const DenseMatrix w = u.solve_lower_t(z.as_dense());
  const DenseMatrix z_tilde_dense = transpose(u.solve_lower_t(transpose(w)));
  const SymMatrix z_tilde = SymMatrix::from_dense(z_tilde_dense, 1e-8);

  const TopKEig eig = sym_eig_top_k(z_tilde, r, 1e-10, 20000);

  InitReport report;
  report.used_equalities = problem.num_equalities();
  report.fallback_used = !eig.converged;
  report.leading_eigenvalue = eig.pairs.empty() ? 0.0 : eig.pairs.front().value;

  DenseMatrix x_tilde(n, r);
  for (std::size_t j = 0; j < eig.pairs.size() && j < r; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      x_tilde(i, j) = report.leading_eigenvalue * eig.pairs[j].vector[i];
    }
  }
  report.x0 = u.solve_upper(x_tilde);
  if (!report.x0.all_finite()) {
    return random_fallback(problem, config);
  }
  return report;
}

}  // namespace bcr
