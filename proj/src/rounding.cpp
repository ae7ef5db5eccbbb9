#include "bcr/rounding.hpp"

#include <cmath>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"
#include "bcr/rng.hpp"

namespace bcr {

namespace {

// Sign convention shared with the eigensolver: flip so the entry of largest
// magnitude is non-negative.
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
  if (!v.empty() && v[idx] < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

std::vector<double> score_vector(const DenseMatrix& x) {
  if (frobenius_norm_sq(x) == 0.0) {
    throw ZeroMatrixError("score_vector: X is the zero matrix");
  }
  // X = U S W^T. The leading right singular pair comes from the small
  // r-by-r Gram X^T X; the scaled left vector is then X w directly.
  const SymMatrix g = gram(x);
  const TopKEig eig = sym_eig_top_k(g, 1, 1e-12, 40000);
  const std::vector<double>& w = eig.pairs.front().vector;
  std::vector<double> score(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += x(i, j) * w[j];
    score[i] = s;
  }
  apply_sign_convention(score);
  return score;
}

double labeling_objective(const std::vector<double>& labels,
                          const SymMatrix& cost) {
  double obj = 0.0;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ci = cost.data() + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += ci[j] * labels[j];
    obj += labels[i] * s;
  }
  return obj;
}

Labeling sign_round(const std::vector<double>& score, const SymMatrix& cost) {
  Labeling out;
  out.labels.resize(score.size());
  for (std::size_t i = 0; i < score.size(); ++i) {
    out.labels[i] = score[i] >= 0.0 ? 1.0 : -1.0;
  }
  out.objective = labeling_objective(out.labels, cost);
  return out;
}

Labeling hyperplane_round(const DenseMatrix& x, const SymMatrix& cost,
                          std::size_t trials, std::uint64_t seed) {
  Labeling best;
  bool have_best = false;

  // Spectral candidate first, so it wins ties.
  if (frobenius_norm_sq(x) > 0.0) {
    best = sign_round(score_vector(x), cost);
    have_best = true;
  }

  Rng rng(seed);
  std::vector<double> projected(x.rows());
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> g = rng.normal_vector(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      projected[i] = dot(x.row(i), g);
    }
    Labeling candidate = sign_round(projected, cost);
    if (!have_best || candidate.objective < best.objective) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

}  // namespace bcr
