#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bcr/matrix.hpp"
#include "bcr/model.hpp"

namespace bcr {

// ---- Low-rank recovery family ----

struct SyntheticSpec {
  std::size_t n = 64;
  std::size_t true_rank = 3;
  std::size_t num_constraints = 300;
  std::uint64_t seed = 0;
};

struct SyntheticInstance {
  SdpProblem problem;
  SymMatrix ground_truth;    // Y_true = sum_k x_k x_k^T
  DenseMatrix ground_factor; // n-by-true_rank, columns x_k
};

// Rank-`true_rank` ground truth with Gaussian factors, Gram objective, and
// Gaussian Gram equality constraints whose bounds match the ground truth.
SyntheticInstance gen_synthetic(const SyntheticSpec& spec);

// Relative recovery error ||X X^T - Y_true||_F / ||Y_true||_F.
double relative_recovery_error(const DenseMatrix& x, const SymMatrix& y_true);

// ---- Annotated graph-cut family ----

struct GraphCutSpec {
  std::size_t n = 20;
  std::size_t feature_dim = 3;
  double gamma_f = 1.0;   // feature bandwidth
  double gamma_d = 0.35;  // spatial bandwidth
  double radius = 1.5;    // affinity cutoff distance
  double kappa = 0.6;     // grouping-constraint strength, in [0, 1]
  // Annotated supports. Empty lists auto-select the extreme corners of the
  // point cloud (min and max of x + y), a synthetic stand-in for user
  // foreground/background seeds.
  std::vector<std::size_t> fg_idx;
  std::vector<std::size_t> bg_idx;
  std::size_t rank = 2;
  std::uint64_t seed = 0;
};

struct GraphCutInstance {
  SdpProblem problem;
  SymMatrix cost;        // graph Laplacian D - W (also the objective)
  SymMatrix affinity;    // W
  DenseMatrix positions; // n-by-2, unit square
  DenseMatrix features;  // n-by-feature_dim
  std::vector<std::size_t> fg_idx;  // resolved annotation
  std::vector<std::size_t> bg_idx;
};

// Random points in the unit square with random features; affinity from the
// banded Gaussian kernel, Laplacian cost, unit diagonal constraints, a
// zero-sum balance constraint, and three foreground/background grouping
// constraints. Throws DegenerateGraphError if the radius isolates a point.
GraphCutInstance gen_graphcut(const GraphCutSpec& spec);

// ---- Co-segmentation family ----

struct CosegSpec {
  std::vector<std::size_t> sizes = {8, 8};  // per-image pixel counts
  double mu = 1.0;                          // intra-image affinity weight
  double lambda_bound = 2.0;                // per-image balance bound
  std::size_t rank = 2;
  std::uint64_t seed = 0;
};

struct CosegInstance {
  SdpProblem problem;
  SymMatrix cost;  // A = A_b + (mu/N) A_w, clamped to PSD
  std::vector<double> planted_labels;  // +-1, the discriminative optimum
};

// Block-diagonal per-image Laplacians plus a discriminative term planted
// around a balanced per-image left/right split; unit diagonal constraints
// and one per-image balance LE constraint.
CosegInstance gen_coseg(const CosegSpec& spec);

// ---- SPD-manifold metric learning family ----

struct MetricSpec {
  std::size_t num_matrices = 20;
  std::size_t dim = 10;
  std::size_t target_rank = 3;  // K
  double xi = 0.5;
  double mu = 0.0;  // hinge weight; <= 0 defers to the METRIC config default
  std::vector<std::pair<std::size_t, std::size_t>> similar_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> dissimilar_pairs;
  std::uint64_t seed = 0;
};

struct PairConstraint {
  std::pair<std::size_t, std::size_t> pair;
  ConstraintSense sense = ConstraintSense::kLe;
  double bound = 0.0;
};

struct MetricInstance {
  SdpProblem problem;
  std::vector<PairConstraint> pair_data;
  std::vector<SymMatrix> source_matrices;  // the SPD inputs S_i
  std::vector<SymMatrix> log_matrices;     // R_i = log(S_i)
  double upper_bound = 0.0;                // u
  double lower_bound = 0.0;                // l
};

// Two clusters of random SPD matrices; log-Euclidean pair distances set the
// bounds u = max(0, rho - xi*tau) and l = rho + xi*tau. Empty pair lists are
// filled with every within-cluster pair (similar) and cross-cluster pair
// (dissimilar).
MetricInstance gen_metric(const MetricSpec& spec);

// Log-Euclidean distance ||log S_i - log S_j||_F^2 between SPD matrices.
double lem_distance(const SymMatrix& si, const SymMatrix& sj);

// Matrix logarithm of an SPD matrix via eigendecomposition; eigenvalues are
// floored at 1e-12 before the log.
SymMatrix spd_log(const SymMatrix& s);

}  // namespace bcr
