#include "bcr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"

namespace bcr {

namespace {

// Radial block objective for one GE constraint in hinge mode:
//   f(s) = (alpha/2) (s - nu)^2 + mu * max(0, b - s^2)^2,  s >= 0.
double hinge_radial_objective(double s, double nu, double b, double alpha,
                              double mu) {
  const double slack = std::max(0.0, b - s * s);
  const double d = s - nu;
  return 0.5 * alpha * d * d + mu * slack * slack;
}

// Real roots of s^3 + p*s + q = 0.
void depressed_cubic_roots(double p, double q, double roots[3], int& count) {
  count = 0;
  const double discriminant = -4.0 * p * p * p - 27.0 * q * q;
  if (discriminant > 0.0) {
    // Three real roots (requires p < 0).
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg =
        std::clamp(3.0 * q / (p * m), -1.0, 1.0);  // = cos(3 theta)
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[count++] =
          m * std::cos(theta - 2.0 * 3.14159265358979323846 * k / 3.0);
    }
  } else {
    const double shifted = q * q / 4.0 + p * p * p / 27.0;
    const double root = std::sqrt(std::max(0.0, shifted));
    roots[count++] = std::cbrt(-q / 2.0 + root) + std::cbrt(-q / 2.0 - root);
  }
}

// Minimizer over s >= 0 of the hinge radial objective, comparing the
// interior regime (s^2 < b, stationary points of a cubic) against the
// exterior regime (s^2 >= b, plain quadratic).
double hinge_radial_minimizer(double nu, double b, double alpha, double mu) {
  const double sqb = std::sqrt(b);
  if (mu <= 0.0) return nu;  // penalty off: unconstrained quadratic minimum

  // Exterior candidate.
  const double s_out = std::max(nu, sqb);
  const double f_out = hinge_radial_objective(s_out, nu, b, alpha, mu);

  // Interior candidates: f'(s) = 4 mu s^3 + (alpha - 4 mu b) s - alpha nu.
  double best_s = 0.0;
  double best_f = hinge_radial_objective(0.0, nu, b, alpha, mu);
  auto consider = [&](double s) {
    s = std::clamp(s, 0.0, sqb);
    // Two Newton polishing steps on f'.
    for (int it = 0; it < 2; ++it) {
      const double g = 4.0 * mu * s * s * s + (alpha - 4.0 * mu * b) * s -
                       alpha * nu;
      const double dg = 12.0 * mu * s * s + (alpha - 4.0 * mu * b);
      if (dg != 0.0) s = std::clamp(s - g / dg, 0.0, sqb);
    }
    const double f = hinge_radial_objective(s, nu, b, alpha, mu);
    if (f < best_f) {
      best_f = f;
      best_s = s;
    }
  };
  consider(sqb);
  double roots[3];
  int count = 0;
  depressed_cubic_roots((alpha - 4.0 * mu * b) / (4.0 * mu),
                        -alpha * nu / (4.0 * mu), roots, count);
  for (int i = 0; i < count; ++i) {
    if (roots[i] >= 0.0 && roots[i] <= sqb) consider(roots[i]);
  }

  return f_out < best_f ? s_out : best_s;
}

// Radial scale of the Q block minimizer for one constraint.
double q_scale(const FactoredConstraint& c, const SolverConfig& config,
               double nu) {
  if (nu == 0.0) return 0.0;
  const double sqb = std::sqrt(c.bound);
  switch (c.sense) {
    case ConstraintSense::kEq: {
      if (c.bound == 0.0) return 0.0;  // zero-radius ball
      const double expansion = config.alpha / (config.alpha - config.beta);
      return std::min(sqb, expansion * nu);
    }
    case ConstraintSense::kLe:
      return std::min(sqb, nu);
    case ConstraintSense::kGe:
      if (config.ge_mode == GeMode::kExteriorProjection) {
        return std::max(sqb, nu);
      }
      return hinge_radial_minimizer(nu, c.bound, config.alpha,
                                    config.hinge_weight);
  }
  return 0.0;
}

// Constraint factors stacked into one matrix so the per-sweep products are
// two large GEMMs instead of one small GEMM per constraint.
struct StackedFactors {
  DenseMatrix l;                     // P-by-N
  std::vector<std::size_t> offsets;  // size m + 1

  static StackedFactors build(const SdpProblem& problem) {
    StackedFactors s;
    std::size_t total = 0;
    s.offsets.push_back(0);
    for (const auto& c : problem.constraints) {
      total += c.factor.rows();
      s.offsets.push_back(total);
    }
    s.l = DenseMatrix(total, problem.dim);
    std::size_t row = 0;
    for (const auto& c : problem.constraints) {
      for (std::size_t i = 0; i < c.factor.rows(); ++i, ++row) {
        for (std::size_t j = 0; j < problem.dim; ++j) {
          s.l(row, j) = c.factor(i, j);
        }
      }
    }
    return s;
  }

  std::size_t rows(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
};

double block_norm(const DenseMatrix& m, std::size_t row_begin,
                  std::size_t row_end) {
  double s = 0.0;
  const std::size_t c = m.cols();
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double* mi = m.data() + i * c;
    for (std::size_t j = 0; j < c; ++j) s += mi[j] * mi[j];
  }
  return std::sqrt(s);
}

// Objective evaluated from stacked V = L X and Q; accumulation runs in
// constraint order to stay consistent with the public entry point.
double objective_from_stacked(const SdpProblem& problem,
                              const SolverConfig& config, const DenseMatrix& x,
                              const DenseMatrix& q_stacked,
                              const DenseMatrix& v_stacked,
                              const StackedFactors& stacked) {
  double obj = problem.objective_is_zero()
                   ? 0.0
                   : quadratic_trace(problem.objective, x);
  const std::size_t cols = x.cols();
  for (std::size_t ci = 0; ci < problem.constraints.size(); ++ci) {
    const auto& c = problem.constraints[ci];
    double couple = 0.0;
    double qnorm_sq = 0.0;
    for (std::size_t i = stacked.offsets[ci]; i < stacked.offsets[ci + 1];
         ++i) {
      const double* qi = q_stacked.data() + i * cols;
      const double* vi = v_stacked.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        const double d = qi[j] - vi[j];
        couple += d * d;
        qnorm_sq += qi[j] * qi[j];
      }
    }
    obj += 0.5 * config.alpha * couple;
    if (c.sense == ConstraintSense::kEq) {
      obj -= 0.5 * config.beta * qnorm_sq;
    } else if (c.sense == ConstraintSense::kGe &&
               config.ge_mode == GeMode::kHinge) {
      const double slack = std::max(0.0, c.bound - qnorm_sq);
      obj += config.hinge_weight * slack * slack;
    }
  }
  return obj;
}

}  // namespace

double bcr_objective(const SdpProblem& problem, const SolverConfig& config,
                     const DenseMatrix& x, const std::vector<DenseMatrix>& q) {
  double obj = problem.objective_is_zero()
                   ? 0.0
                   : quadratic_trace(problem.objective, x);
  for (std::size_t ci = 0; ci < problem.constraints.size(); ++ci) {
    const auto& c = problem.constraints[ci];
    const DenseMatrix v = matmul(c.factor, x);
    double couple = 0.0;
    double qnorm_sq = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      for (std::size_t j = 0; j < v.cols(); ++j) {
        const double d = q[ci](i, j) - v(i, j);
        couple += d * d;
        qnorm_sq += q[ci](i, j) * q[ci](i, j);
      }
    }
    obj += 0.5 * config.alpha * couple;
    if (c.sense == ConstraintSense::kEq) {
      obj -= 0.5 * config.beta * qnorm_sq;
    } else if (c.sense == ConstraintSense::kGe &&
               config.ge_mode == GeMode::kHinge) {
      const double slack = std::max(0.0, c.bound - qnorm_sq);
      obj += config.hinge_weight * slack * slack;
    }
  }
  return obj;
}

std::vector<DenseMatrix> update_Q(const SdpProblem& problem,
                                  const SolverConfig& config,
                                  const DenseMatrix& x) {
  config.validate();
  std::vector<DenseMatrix> q;
  q.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) {
    DenseMatrix v = matmul(c.factor, x);
    const double nu = frobenius_norm(v);
    const double s = q_scale(c, config, nu);
    q.push_back(nu > 0.0 ? scaled(v, s / nu) : std::move(v));
  }
  return q;
}

SymMatrix x_stage_system(const SdpProblem& problem,
                         const SolverConfig& config) {
  const double c_scale = config.x_system == XSystem::kExact ? 2.0 : 1.0;
  SymMatrix system(problem.dim);
  if (!problem.objective_is_zero()) {
    system = sym_scaled(problem.objective, c_scale);
  }
  for (const auto& c : problem.constraints) {
    const SymMatrix g = gram(c.factor);
    for (std::size_t i = 0; i < problem.dim; ++i)
      for (std::size_t j = 0; j < problem.dim; ++j)
        system(i, j) += config.alpha * g(i, j);
  }
  return system;
}

SpdFactor factor_x_stage(const SdpProblem& problem,
                         const SolverConfig& config) {
  const SymMatrix system = x_stage_system(problem, config);
  const double scale = 1.0 + spectral_norm(system, 1e-6);
  std::string last_error;
  for (double ridge : config.ridge_schedule) {
    try {
      return factor_spd(system, ridge * scale);
    } catch (const NotSpdError& e) {
      last_error = e.what();
    }
  }
  throw NotSpdError("X-stage system not factorizable at any scheduled ridge: " +
                    last_error);
}

DenseMatrix update_X_closed(const SdpProblem& problem,
                            const SolverConfig& config,
                            const std::vector<DenseMatrix>& q,
                            const SpdFactor& factor) {
  const double rhs_scale =
      config.x_system == XSystem::kExact ? config.alpha : 1.0;
  DenseMatrix rhs(problem.dim, problem.rank);
  for (std::size_t ci = 0; ci < problem.constraints.size(); ++ci) {
    const DenseMatrix t = transpose_times(problem.constraints[ci].factor, q[ci]);
    for (std::size_t i = 0; i < problem.dim; ++i)
      for (std::size_t j = 0; j < problem.rank; ++j)
        rhs(i, j) += rhs_scale * t(i, j);
  }
  return factor.apply(rhs);
}

double auto_gradient_step(const SdpProblem& problem,
                          const SolverConfig& config) {
  double lipschitz = problem.objective_is_zero()
                         ? 0.0
                         : 2.0 * spectral_norm(problem.objective);
  for (const auto& c : problem.constraints) {
    lipschitz += config.alpha * spectral_norm(gram(c.factor), 1e-8);
  }
  return lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
}

DenseMatrix update_X_gradient(const SdpProblem& problem,
                              const SolverConfig& config, const DenseMatrix& x,
                              const std::vector<DenseMatrix>& q) {
  const double eta =
      config.grad_step > 0.0 ? config.grad_step : auto_gradient_step(problem, config);
  DenseMatrix grad =
      problem.objective_is_zero()
          ? DenseMatrix(problem.dim, problem.rank)
          : scaled(sym_times(problem.objective, x), 2.0);
  for (std::size_t ci = 0; ci < problem.constraints.size(); ++ci) {
    const auto& l = problem.constraints[ci].factor;
    const DenseMatrix t = transpose_times(l, difference(matmul(l, x), q[ci]));
    for (std::size_t i = 0; i < problem.dim; ++i)
      for (std::size_t j = 0; j < problem.rank; ++j)
        grad(i, j) += config.alpha * t(i, j);
  }
  return difference(x, scaled(grad, eta));
}

SolveResult solve(const SdpProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t n = problem.dim;
  const std::size_t r = problem.rank;
  const std::size_t m = problem.constraints.size();

  const StackedFactors stacked = StackedFactors::build(problem);

  SolveResult result;
  for (const auto& c : problem.constraints) {
    if (c.sense == ConstraintSense::kEq && c.bound == 0.0) {
      ++result.zero_radius_constraints;
    }
  }

  const InitReport init = initialize(problem, config);
  DenseMatrix x = init.x0;

  SpdFactor factor;
  double grad_eta = config.grad_step;
  if (config.x_update == XUpdate::kClosedForm) {
    factor = factor_x_stage(problem, config);
  } else if (grad_eta <= 0.0) {
    grad_eta = auto_gradient_step(problem, config);
  }
  const double rhs_scale =
      config.x_system == XSystem::kExact ? config.alpha : 1.0;

  DenseMatrix v(stacked.l.rows(), r);
  matmul_into(stacked.l, x, v);
  DenseMatrix q(v.rows(), r);
  DenseMatrix rhs(n, r);
  DenseMatrix work(n, r);
  double prev_obj = 0.0;

  for (std::size_t sweep = 1; sweep <= config.max_iters; ++sweep) {
    // Q stage: per-constraint radial rescale of V.
    for (std::size_t ci = 0; ci < m; ++ci) {
      const std::size_t lo = stacked.offsets[ci];
      const std::size_t hi = stacked.offsets[ci + 1];
      const double nu = block_norm(v, lo, hi);
      const double s = q_scale(problem.constraints[ci], config, nu);
      const double rescale = nu > 0.0 ? s / nu : 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < r; ++j) q(i, j) = rescale * v(i, j);
    }

    // X stage.
    if (config.x_update == XUpdate::kClosedForm) {
      transpose_times_into(stacked.l, q, rhs);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) x(i, j) = rhs_scale * rhs(i, j);
      factor.apply_in_place(x);
    } else {
      // v is consumed as the residual buffer V - Q for the coupling term.
      for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < r; ++j) v(i, j) -= q(i, j);
      transpose_times_into(stacked.l, v, rhs);
      if (!problem.objective_is_zero()) {
        sym_times_into(problem.objective, x, work);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < r; ++j)
            x(i, j) -= grad_eta * (2.0 * work(i, j) + config.alpha * rhs(i, j));
      } else {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < r; ++j)
            x(i, j) -= grad_eta * config.alpha * rhs(i, j);
      }
    }

    matmul_into(stacked.l, x, v);
    const double obj =
        objective_from_stacked(problem, config, x, q, v, stacked);
    result.objective_trace.push_back(obj);
    result.iterations = sweep;

    if (sweep >= 2 &&
        std::abs(obj - prev_obj) <= config.rel_obj_tol * (1.0 + std::abs(obj))) {
      result.converged = true;
      break;
    }
    prev_obj = obj;
  }

  result.x = std::move(x);
  result.q.reserve(m);
  result.feasibility.reserve(m);
  for (std::size_t ci = 0; ci < m; ++ci) {
    const std::size_t lo = stacked.offsets[ci];
    const std::size_t hi = stacked.offsets[ci + 1];
    DenseMatrix qc(hi - lo, r);
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < r; ++j) qc(i - lo, j) = q(i, j);
    result.q.push_back(std::move(qc));
    const double value = block_norm(v, lo, hi);
    result.feasibility.push_back(
        constraint_violation(problem.constraints[ci], value * value));
  }

  const auto t1 = std::chrono::steady_clock::now();
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return result;
}

}  // namespace bcr
