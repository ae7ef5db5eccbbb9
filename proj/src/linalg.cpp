#include "bcr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bcr/errors.hpp"
#include "bcr/rng.hpp"

namespace bcr {

namespace {

constexpr std::uint64_t kPerturbSeed = 0x9e3779b97f4a7c15ULL;

// Largest-magnitude entry non-negative, first index wins ties.
void apply_sign_convention(std::vector<double>& v) {
  std::size_t idx = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (v[idx] < 0.0) {
    for (double& x : v) x = -x;
  }
}

void normalize(std::vector<double>& v) {
  const double n = norm2(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

std::vector<double> ones_start(std::size_t n) {
  return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> perturbed_start(std::size_t n) {
  Rng rng(kPerturbSeed);
  std::vector<double> v = ones_start(n);
  for (double& x : v) x += 0.25 * rng.normal();
  normalize(v);
  return v;
}

std::vector<double> sym_apply(const SymMatrix& m,
                              const std::vector<double>& v) {
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* mi = m.data() + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += mi[j] * v[j];
    out[i] = s;
  }
  return out;
}

// Infinity norm: upper bound for the spectral radius.
double inf_norm(const SymMatrix& m) {
  const std::size_t n = m.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

void orthogonalize_against(std::vector<double>& v,
                           const std::vector<EigPair>& basis) {
  for (const EigPair& p : basis) {
    const double c = dot(v, p.vector);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * p.vector[i];
  }
}

struct PowerResult {
  double value = 0.0;
  std::vector<double> vector;
  bool converged = false;
};

// Power iteration driven by `iterate`, with convergence judged by
// `evaluate`, which returns the Rayleigh quotient and residual norm of the
// quantity the caller actually certifies. Deterministic: fixed start,
// a single fixed-seed perturbed restart if the first start stalls.
template <typename IterateFn, typename EvaluateFn>
PowerResult power_iterate(IterateFn&& iterate, EvaluateFn&& evaluate,
                          std::size_t n, const std::vector<EigPair>& deflated,
                          double tol, std::size_t max_iters) {
  PowerResult best;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> v = attempt == 0 ? ones_start(n) : perturbed_start(n);
    orthogonalize_against(v, deflated);
    if (norm2(v) < 1e-8) continue;  // start lies inside the deflated space
    normalize(v);

    for (std::size_t it = 0; it < max_iters; ++it) {
      const auto [lambda, residual] = evaluate(v);
      if (residual < best_residual) {
        best_residual = residual;
        best.value = lambda;
        best.vector = v;
      }
      if (residual <= tol * (1.0 + std::abs(lambda))) {
        best.converged = true;
        best.value = lambda;
        best.vector = v;
        return best;
      }
      std::vector<double> w = iterate(v);
      orthogonalize_against(w, deflated);
      const double wn = norm2(w);
      if (!(wn > 0.0) || !std::isfinite(wn)) break;  // stalled; restart
      for (double& x : w) x /= wn;
      v = std::move(w);
    }
  }
  return best;
}

}  // namespace

TopKEig sym_eig_top_k(const SymMatrix& m, std::size_t k, double tol,
                      std::size_t max_iters) {
  const std::size_t n = m.size();
  if (k < 1 || k > n) {
    throw ValidationError("sym_eig_top_k: k = " + std::to_string(k) +
                          " out of range for n = " + std::to_string(n));
  }

  // Shift so the algebraically largest eigenvalue dominates in magnitude.
  const double sigma = inf_norm(m);
  SymMatrix shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += sigma;

  TopKEig out;
  for (std::size_t j = 0; j < k; ++j) {
    auto iterate = [&](const std::vector<double>& v) {
      std::vector<double> w = sym_apply(shifted, v);
      // Hotelling deflation of the pairs already found.
      for (const EigPair& p : out.pairs) {
        const double c = (p.value + sigma) * dot(p.vector, v);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * p.vector[i];
      }
      return w;
    };
    // Certified residual is on the original matrix.
    auto evaluate = [&](const std::vector<double>& v) {
      const std::vector<double> mv = sym_apply(m, v);
      const double lambda = dot(v, mv);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = mv[i] - lambda * v[i];
        r += d * d;
      }
      return std::pair<double, double>(lambda, std::sqrt(r));
    };
    PowerResult r =
        power_iterate(iterate, evaluate, n, out.pairs, tol, max_iters);
    if (r.vector.empty() || !r.converged) {
      // Clustered spectrum or exhausted deflation: recompute everything with
      // the always-convergent dense path.
      const JacobiEigen full = jacobi_eigen(m);
      out.pairs.clear();
      for (std::size_t jj = 0; jj < k; ++jj) {
        EigPair pair;
        pair.value = full.values[jj];
        pair.vector.resize(n);
        for (std::size_t i = 0; i < n; ++i) pair.vector[i] = full.vectors(i, jj);
        out.pairs.push_back(std::move(pair));
      }
      out.converged = full.converged;
      return out;
    }
    EigPair pair;
    pair.vector = std::move(r.vector);
    normalize(pair.vector);
    apply_sign_convention(pair.vector);
    pair.value = dot(pair.vector, sym_apply(m, pair.vector));
    out.pairs.push_back(std::move(pair));
  }

  std::stable_sort(
      out.pairs.begin(), out.pairs.end(),
      [](const EigPair& a, const EigPair& b) { return a.value > b.value; });
  return out;
}

JacobiEigen jacobi_eigen(const SymMatrix& m, double tol,
                         std::size_t max_sweeps) {
  const std::size_t n = m.size();
  SymMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);

  const double threshold = tol * (1.0 + frobenius_norm(m));

  JacobiEigen out;
  out.converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= threshold) {
      out.converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return a(i, i) > a(j, j);
                   });

  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t src = order[jj];
    out.values[jj] = a(src, src);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, src);
    normalize(col);
    apply_sign_convention(col);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, jj) = col[i];
  }
  return out;
}

DenseMatrix psd_sqrt_factor(const SymMatrix& a, double clamp_tol) {
  const std::size_t n = a.size();
  const JacobiEigen eig = jacobi_eigen(a);
  const double lambda_max = eig.values.empty() ? 0.0 : eig.values.front();
  const double reject = -clamp_tol * std::max(1.0, lambda_max);
  const double clamp = clamp_tol * std::max(0.0, lambda_max);

  std::size_t p = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.values[j] < reject) {
      throw NotPsdError("psd_sqrt_factor: eigenvalue " +
                        std::to_string(eig.values[j]) +
                        " below PSD tolerance");
    }
    if (eig.values[j] > clamp) ++p;
  }

  DenseMatrix l(p, n);
  for (std::size_t j = 0; j < p; ++j) {
    const double s = std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < n; ++i) l(j, i) = s * eig.vectors(i, j);
  }
  return l;
}

double spectral_norm(const SymMatrix& m, double tol) {
  const std::size_t n = m.size();
  if (n == 0 || m.is_zero()) return 0.0;

  // Power iteration on M^2: converges to max |eigenvalue|^2 regardless of
  // the sign pattern of the extreme eigenvalues.
  auto iterate = [&](const std::vector<double>& v) {
    return sym_apply(m, sym_apply(m, v));
  };
  auto evaluate = [&](const std::vector<double>& v) {
    const std::vector<double> w = iterate(v);
    const double lambda = dot(v, w);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - lambda * v[i];
      r += d * d;
    }
    return std::pair<double, double>(lambda, std::sqrt(r));
  };
  const std::vector<EigPair> none;
  PowerResult r = power_iterate(iterate, evaluate, n, none, tol, 10000);
  if (r.converged && r.value >= 0.0) return std::sqrt(r.value);

  const JacobiEigen eig = jacobi_eigen(m);
  double best = 0.0;
  for (double v : eig.values) best = std::max(best, std::abs(v));
  return best;
}

double min_eigenvalue(const SymMatrix& m, double tol) {
  const std::size_t n = m.size();
  if (n == 0) return 0.0;
  const double sigma = inf_norm(m);
  // sigma*I - M is PSD with dominant eigenvalue sigma - lambda_min, and its
  // residual at (v, sigma - lambda) equals the residual of M at (v, lambda).
  SymMatrix flipped(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      flipped(i, j) = (i == j ? sigma : 0.0) - m(i, j);

  auto iterate = [&](const std::vector<double>& v) {
    return sym_apply(flipped, v);
  };
  auto evaluate = [&](const std::vector<double>& v) {
    const std::vector<double> w = iterate(v);
    const double lambda = dot(v, w);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - lambda * v[i];
      r += d * d;
    }
    return std::pair<double, double>(lambda, std::sqrt(r));
  };
  const std::vector<EigPair> none;
  PowerResult r = power_iterate(iterate, evaluate, n, none, tol, 10000);
  if (r.converged) return sigma - r.value;

  const JacobiEigen eig = jacobi_eigen(m);
  return eig.values.back();
}

DenseMatrix SpdFactor::apply(const DenseMatrix& b) const {
  DenseMatrix x = b;
  apply_in_place(x);
  return x;
}

void SpdFactor::apply_in_place(DenseMatrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw ValidationError("SpdFactor: shape mismatch");
  const std::size_t cols = b.cols();
  // Forward substitution U^T y = b, then back substitution U x = y.
  for (std::size_t i = 0; i < n; ++i) {
    double* bi = b.data() + i * cols;
    for (std::size_t j = 0; j < i; ++j) {
      const double uji = upper_(j, i);
      if (uji == 0.0) continue;
      const double* bj = b.data() + j * cols;
      for (std::size_t col = 0; col < cols; ++col) bi[col] -= uji * bj[col];
    }
    const double inv = 1.0 / upper_(i, i);
    for (std::size_t col = 0; col < cols; ++col) bi[col] *= inv;
  }
  for (std::size_t i = n; i-- > 0;) {
    double* bi = b.data() + i * cols;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double uij = upper_(i, j);
      if (uij == 0.0) continue;
      const double* bj = b.data() + j * cols;
      for (std::size_t col = 0; col < cols; ++col) bi[col] -= uij * bj[col];
    }
    const double inv = 1.0 / upper_(i, i);
    for (std::size_t col = 0; col < cols; ++col) bi[col] *= inv;
  }
}

DenseMatrix SpdFactor::solve_upper(const DenseMatrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw ValidationError("SpdFactor: shape mismatch");
  DenseMatrix x = b;
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x(ii, col);
      for (std::size_t j = ii + 1; j < n; ++j) s -= upper_(ii, j) * x(j, col);
      x(ii, col) = s / upper_(ii, ii);
    }
  }
  return x;
}

DenseMatrix SpdFactor::solve_lower_t(const DenseMatrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw ValidationError("SpdFactor: shape mismatch");
  DenseMatrix x = b;
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, col);
      for (std::size_t j = 0; j < i; ++j) s -= upper_(j, i) * x(j, col);
      x(i, col) = s / upper_(i, i);
    }
  }
  return x;
}

SpdFactor factor_spd(const SymMatrix& m, double ridge) {
  const std::size_t n = m.size();
  DenseMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = m(i, j) + (i == j ? ridge : 0.0);
      for (std::size_t k = 0; k < i; ++k) s -= u(k, i) * u(k, j);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) {
          throw NotSpdError("factor_spd: non-positive pivot at row " +
                            std::to_string(i));
        }
        u(i, j) = std::sqrt(s);
      } else {
        u(i, j) = s / u(i, i);
      }
    }
  }
  SpdFactor f;
  f.upper_ = std::move(u);
  return f;
}

}  // namespace bcr
