#include "bcr/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"
#include "bcr/rng.hpp"

namespace bcr {

namespace {

SymMatrix clamp_to_psd(const SymMatrix& a, double floor = 0.0) {
  const JacobiEigen eig = jacobi_eigen(a);
  const std::size_t n = a.size();
  SymMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = std::max(eig.values[k], floor);
    if (lambda == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = eig.vectors(i, k);
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lambda * vi * eig.vectors(j, k);
    }
  }
  // Symmetrize exactly against accumulation roundoff.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

DenseMatrix row_vector(const std::vector<double>& v) {
  return DenseMatrix(1, v.size(), v);
}

struct Geck {
  SymMatrix w;
  SymMatrix laplacian;
  DenseMatrix positions;  // n-by-2
  DenseMatrix features;   // n-by-feature_dim
};

// Geometric-graph Laplacian on `n` seeded random points in the unit square.
// Throws DegenerateGraphError when a point has no neighbor within `radius`.
Geck geometric_laplacian(std::size_t n, std::size_t feature_dim,
                         double gamma_f, double gamma_d, double radius,
                         Rng& rng, const std::string& what) {
  std::vector<double> px(n), py(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = rng.uniform();
    py[i] = rng.uniform();
  }
  DenseMatrix features(n, feature_dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < feature_dim; ++j)
      features(i, j) = rng.uniform();

  SymMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double dx = px[i] - px[j];
      const double dy = py[i] - py[j];
      const double dist2 = dx * dx + dy * dy;
      if (std::sqrt(dist2) >= radius) continue;
      double df2 = 0.0;
      for (std::size_t k = 0; k < feature_dim; ++k) {
        const double d = features(i, k) - features(j, k);
        df2 += d * d;
      }
      const double value =
          std::exp(-df2 / (gamma_f * gamma_f) - dist2 / (gamma_d * gamma_d));
      w(i, j) = value;
      w(j, i) = value;
    }
  }

  SymMatrix laplacian(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    double neighbors = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      degree += w(i, j);
      if (j != i) neighbors += w(i, j);
    }
    if (neighbors == 0.0) {
      throw DegenerateGraphError(what + ": point " + std::to_string(i) +
                                 " is isolated at radius " +
                                 std::to_string(radius));
    }
    for (std::size_t j = 0; j < n; ++j) laplacian(i, j) = -w(i, j);
    laplacian(i, i) += degree;
  }
  DenseMatrix positions(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    positions(i, 0) = px[i];
    positions(i, 1) = py[i];
  }
  return {std::move(w), std::move(laplacian), std::move(positions),
          std::move(features)};
}

}  // namespace

SyntheticInstance gen_synthetic(const SyntheticSpec& spec) {
  if (spec.true_rank < 1 || spec.true_rank > spec.n ||
      spec.num_constraints < 1) {
    throw ValidationError("gen_synthetic: invalid spec");
  }
  Rng rng(spec.seed);
  const std::size_t n = spec.n;

  // Ground truth Y = X* X*^T with standard normal columns.
  DenseMatrix x_true(n, spec.true_rank);
  for (std::size_t j = 0; j < spec.true_rank; ++j)
    for (std::size_t i = 0; i < n; ++i) x_true(i, j) = rng.normal();
  SymMatrix y_true(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < spec.true_rank; ++k)
        s += x_true(i, k) * x_true(j, k);
      y_true(i, j) = s;
    }

  // Gram objective from a standard normal matrix.
  const SymMatrix objective = gram(rng.normal_matrix(n, n));

  std::vector<FactoredConstraint> constraints;
  constraints.reserve(spec.num_constraints);
  for (std::size_t c = 0; c < spec.num_constraints; ++c) {
    DenseMatrix h = rng.normal_matrix(n, n);
    // b = trace(H^T H Y) = ||H X*||_F^2: exact on the ground truth.
    const double bound = frobenius_norm_sq(matmul(h, x_true));
    constraints.push_back({std::move(h), bound, ConstraintSense::kEq,
                           "gram" + std::to_string(c)});
  }

  SyntheticInstance out;
  out.problem =
      make_problem(objective, std::move(constraints), n, spec.true_rank);
  out.ground_truth = std::move(y_true);
  out.ground_factor = std::move(x_true);
  return out;
}

double relative_recovery_error(const DenseMatrix& x, const SymMatrix& y_true) {
  const std::size_t n = y_true.size();
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double rec = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) rec += x(i, k) * x(j, k);
      const double d = rec - y_true(i, j);
      num += d * d;
    }
  }
  const double den = frobenius_norm(y_true);
  return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

GraphCutInstance gen_graphcut(const GraphCutSpec& spec) {
  const std::size_t n = spec.n;
  if (spec.fg_idx.empty() != spec.bg_idx.empty()) {
    throw ValidationError(
        "gen_graphcut: fg/bg must both be given or both left empty");
  }
  if (spec.kappa < 0.0 || spec.kappa > 1.0) {
    throw ValidationError("gen_graphcut: kappa must lie in [0, 1]");
  }
  for (std::size_t i : spec.fg_idx) {
    if (i >= n) throw ValidationError("gen_graphcut: fg index out of range");
    for (std::size_t j : spec.bg_idx) {
      if (j >= n) throw ValidationError("gen_graphcut: bg index out of range");
      if (i == j)
        throw ValidationError("gen_graphcut: fg/bg sets must be disjoint");
    }
  }

  Rng rng(spec.seed);
  auto geo = geometric_laplacian(n, spec.feature_dim, spec.gamma_f,
                                 spec.gamma_d, spec.radius, rng,
                                 "gen_graphcut");
  SymMatrix& w = geo.w;
  SymMatrix& laplacian = geo.laplacian;

  std::vector<std::size_t> fg = spec.fg_idx;
  std::vector<std::size_t> bg = spec.bg_idx;
  if (fg.empty()) {
    // Synthetic annotation: opposite corners of the point cloud.
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const double s = geo.positions(i, 0) + geo.positions(i, 1);
      if (s < geo.positions(lo, 0) + geo.positions(lo, 1)) lo = i;
      if (s > geo.positions(hi, 0) + geo.positions(hi, 1)) hi = i;
    }
    fg = {lo};
    bg = {hi};
  }

  // P = D^{-1} W row by row.
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += w(i, j);
    for (std::size_t j = 0; j < n; ++j) p(i, j) = w(i, j) / degree;
  }

  std::vector<FactoredConstraint> constraints;
  constraints.reserve(n + 4);
  for (std::size_t i = 0; i < n; ++i) {
    DenseMatrix e(1, n);
    e(0, i) = 1.0;
    constraints.push_back(
        {std::move(e), 1.0, ConstraintSense::kEq, "diag" + std::to_string(i)});
  }
  // Balance: (1^T x)^2 = 0.
  constraints.push_back({DenseMatrix(1, n, std::vector<double>(n, 1.0)), 0.0,
                         ConstraintSense::kEq, "balance"});

  // Grouping rows t^T P with bounds kappa * ||t^T P||_1^2.
  auto grouping = [&](const std::vector<double>& t, const std::string& label) {
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += t[i] * p(i, j);
      row[j] = s;
    }
    double l1 = 0.0;
    for (double v : row) l1 += std::abs(v);
    constraints.push_back({row_vector(row), spec.kappa * l1 * l1,
                           ConstraintSense::kGe, label});
  };
  std::vector<double> t_f(n, 0.0), t_b(n, 0.0), t_d(n, 0.0);
  for (std::size_t i : fg) t_f[i] = 1.0;
  for (std::size_t i : bg) t_b[i] = 1.0;
  for (std::size_t i = 0; i < n; ++i) t_d[i] = t_f[i] - t_b[i];
  grouping(t_f, "group_fg");
  grouping(t_b, "group_bg");
  grouping(t_d, "group_fg_minus_bg");

  GraphCutInstance out;
  out.problem =
      make_problem(laplacian, std::move(constraints), n, spec.rank);
  out.cost = std::move(laplacian);
  out.affinity = std::move(w);
  out.positions = std::move(geo.positions);
  out.features = std::move(geo.features);
  out.fg_idx = std::move(fg);
  out.bg_idx = std::move(bg);
  return out;
}

CosegInstance gen_coseg(const CosegSpec& spec) {
  const std::size_t images = spec.sizes.size();
  if (images == 0 || spec.lambda_bound <= 0.0) {
    throw ValidationError("gen_coseg: invalid spec");
  }
  for (std::size_t sz : spec.sizes) {
    if (sz < 2) {
      throw ValidationError("gen_coseg: every image needs at least 2 pixels");
    }
  }
  const std::size_t n =
      std::accumulate(spec.sizes.begin(), spec.sizes.end(), std::size_t{0});

  Rng rng(spec.seed);

  // Intra-image term: block-diagonal Laplacians of per-image geometric
  // graphs. Planted labels split each image into left and right halves of
  // its point cloud, so smoothness and discrimination agree.
  SymMatrix a_w(n);
  std::vector<double> planted(n, 0.0);
  std::size_t offset = 0;
  for (std::size_t img = 0; img < images; ++img) {
    const std::size_t sz = spec.sizes[img];
    // Radius sqrt(2) keeps every within-image pair connected.
    const auto geo = geometric_laplacian(
        sz, 3, 1.0, 0.7, 1.4143, rng, "gen_coseg image " + std::to_string(img));
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j)
        a_w(offset + i, offset + j) = geo.laplacian(i, j);
    // Balanced split at the median x coordinate.
    std::vector<std::size_t> order(sz);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return geo.positions(a, 0) < geo.positions(b, 0);
    });
    for (std::size_t k = 0; k < sz; ++k)
      planted[offset + order[k]] = k < sz / 2 ? 1.0 : -1.0;
    offset += sz;
  }

  // Discriminative term: PSD, vanishing exactly on the planted labeling and
  // the constant vector, plus a small random Gram for non-degeneracy.
  const double inv_n = 1.0 / static_cast<double>(n);
  const SymMatrix noise = gram(rng.normal_matrix(n, n));
  SymMatrix a(n);
  const double smooth = spec.mu * inv_n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double ab = (i == j ? 1.0 : 0.0) - inv_n -
                  planted[i] * planted[j] * inv_n;
      ab += 0.05 * inv_n * noise(i, j);
      a(i, j) = ab + smooth * a_w(i, j);
    }
  }
  a = clamp_to_psd(a);

  std::vector<FactoredConstraint> constraints;
  constraints.reserve(n + images);
  for (std::size_t i = 0; i < n; ++i) {
    DenseMatrix e(1, n);
    e(0, i) = 1.0;
    constraints.push_back(
        {std::move(e), 1.0, ConstraintSense::kEq, "diag" + std::to_string(i)});
  }
  offset = 0;
  for (std::size_t img = 0; img < images; ++img) {
    std::vector<double> delta(n, 0.0);
    for (std::size_t i = 0; i < spec.sizes[img]; ++i) delta[offset + i] = 1.0;
    offset += spec.sizes[img];
    constraints.push_back({row_vector(delta),
                           spec.lambda_bound * spec.lambda_bound,
                           ConstraintSense::kLe,
                           "image_balance" + std::to_string(img)});
  }

  CosegInstance out;
  out.problem = make_problem(a, std::move(constraints), n, spec.rank);
  out.cost = std::move(a);
  out.planted_labels = std::move(planted);
  return out;
}

SymMatrix spd_log(const SymMatrix& s) {
  const JacobiEigen eig = jacobi_eigen(s);
  const std::size_t n = s.size();
  SymMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = std::log(std::max(eig.values[k], 1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = eig.vectors(i, k);
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lambda * vi * eig.vectors(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

double lem_distance(const SymMatrix& si, const SymMatrix& sj) {
  const SymMatrix ri = spd_log(si);
  const SymMatrix rj = spd_log(sj);
  double d = 0.0;
  for (std::size_t i = 0; i < si.size(); ++i)
    for (std::size_t j = 0; j < si.size(); ++j) {
      const double v = ri(i, j) - rj(i, j);
      d += v * v;
    }
  return d;
}

MetricInstance gen_metric(const MetricSpec& spec) {
  const std::size_t count = spec.num_matrices;
  const std::size_t dim = spec.dim;
  if (count < 2 || dim < 1 || spec.target_rank < 1 ||
      spec.target_rank > dim) {
    throw ValidationError("gen_metric: invalid spec");
  }

  Rng rng(spec.seed);

  // Two clusters with shared bases; noise keeps every S_i strictly PD.
  const std::size_t half = count / 2;
  std::vector<DenseMatrix> bases;
  bases.push_back(rng.normal_matrix(dim, dim));
  bases.push_back(rng.normal_matrix(dim, dim));

  MetricInstance out;
  out.source_matrices.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t cluster = i < half ? 0 : 1;
    const SymMatrix base = gram(bases[cluster]);
    const SymMatrix noise = gram(rng.normal_matrix(dim, dim));
    SymMatrix s(dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        s(a, b) = base(a, b) + 0.1 * noise(a, b);
    if (min_eigenvalue(s) < 0.0) {
      throw NotPsdError("gen_metric: generated matrix is not PSD");
    }
    out.source_matrices.push_back(std::move(s));
  }

  out.log_matrices.reserve(count);
  for (const auto& s : out.source_matrices) out.log_matrices.push_back(spd_log(s));

  // Pairwise log-Euclidean distances over all pairs set the bounds.
  double mean = 0.0;
  std::vector<double> dists;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      double d = 0.0;
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
          const double v = out.log_matrices[i](a, b) - out.log_matrices[j](a, b);
          d += v * v;
        }
      dists.push_back(d);
      mean += d;
    }
  }
  mean /= static_cast<double>(dists.size());
  double var = 0.0;
  for (double d : dists) var += (d - mean) * (d - mean);
  const double stddev = std::sqrt(var / static_cast<double>(dists.size()));

  // u below the mean, l above; u clamped at zero since bounds are radii.
  out.upper_bound = std::max(0.0, mean - spec.xi * stddev);
  out.lower_bound = mean + spec.xi * stddev;

  auto similar = spec.similar_pairs;
  auto dissimilar = spec.dissimilar_pairs;
  for (const auto& s : similar) {
    for (const auto& d : dissimilar) {
      if ((s.first == d.first && s.second == d.second) ||
          (s.first == d.second && s.second == d.first)) {
        throw ValidationError("gen_metric: similar and dissimilar pairs overlap");
      }
    }
  }
  if (similar.empty() && dissimilar.empty()) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        const bool same_cluster = (i < half) == (j < half);
        if (same_cluster) {
          similar.emplace_back(i, j);
        } else {
          dissimilar.emplace_back(i, j);
        }
      }
  }

  std::vector<FactoredConstraint> constraints;
  constraints.reserve(similar.size() + dissimilar.size());
  auto add_pair = [&](std::pair<std::size_t, std::size_t> pr,
                      ConstraintSense sense, double bound,
                      const std::string& tag) {
    if (pr.first >= count || pr.second >= count || pr.first == pr.second) {
      throw ValidationError("gen_metric: pair index out of range");
    }
    DenseMatrix diff(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        diff(a, b) =
            out.log_matrices[pr.first](a, b) - out.log_matrices[pr.second](a, b);
    constraints.push_back({std::move(diff), bound, sense,
                           tag + std::to_string(pr.first) + "_" +
                               std::to_string(pr.second)});
    out.pair_data.push_back({pr, sense, bound});
  };
  for (const auto& pr : similar)
    add_pair(pr, ConstraintSense::kLe, out.upper_bound, "similar");
  for (const auto& pr : dissimilar)
    add_pair(pr, ConstraintSense::kGe, out.lower_bound, "dissimilar");

  out.problem = make_problem(SymMatrix::identity(dim), std::move(constraints),
                             dim, spec.target_rank);
  return out;
}

}  // namespace bcr
