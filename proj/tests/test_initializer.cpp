#include <doctest.h>

#include <cmath>

#include "bcr/errors.hpp"
#include "bcr/initializer.hpp"
#include "bcr/linalg.hpp"
#include "bcr/model.hpp"
#include "bcr/rng.hpp"

using namespace bcr;

namespace {

SolverConfig basic_config(std::uint64_t seed = 0) {
  SolverConfig cfg;
  cfg.alpha = 2.0;
  cfg.beta = 1.0;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("build_Z: single equality term") {
  const SdpProblem p = make_problem(
      SymMatrix::identity(2),
      {{DenseMatrix::identity(2), 2.0, ConstraintSense::kEq, ""}}, 2, 1);
  const SymMatrix z = build_Z(p);
  CHECK(z(0, 0) == doctest::Approx(2.0));
  CHECK(z(1, 1) == doctest::Approx(2.0));
  CHECK(z(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("build_Z: averages diagonal rank-1 terms") {
  DenseMatrix e1(1, 2), e2(1, 2);
  e1(0, 0) = 1.0;
  e2(0, 1) = 1.0;
  const SdpProblem p = make_problem(
      SymMatrix::identity(2),
      {{e1, 1.0, ConstraintSense::kEq, ""}, {e2, 1.0, ConstraintSense::kEq, ""}},
      2, 1);
  const SymMatrix z = build_Z(p);
  CHECK(z(0, 0) == doctest::Approx(0.5));
  CHECK(z(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("build_Z: ignores inequality constraints, errors with none") {
  DenseMatrix e1(1, 2);
  e1(0, 0) = 1.0;
  const SdpProblem p = make_problem(
      SymMatrix::identity(2),
      {{e1, 5.0, ConstraintSense::kLe, ""},
       {DenseMatrix::identity(2), 1.0, ConstraintSense::kEq, ""}},
      2, 1);
  const SymMatrix z = build_Z(p);
  // Only the identity EQ constraint contributes.
  CHECK(z(0, 0) == doctest::Approx(1.0));

  const SdpProblem q = make_problem(
      SymMatrix::identity(2), {{e1, 5.0, ConstraintSense::kLe, ""}}, 2, 1);
  CHECK_THROWS_AS(build_Z(q), NoEqualityConstraintsError);
}

TEST_CASE("build_Z: matches direct re-summation on a random problem") {
  Rng rng(31);
  std::vector<FactoredConstraint> cs;
  for (int i = 0; i < 6; ++i) {
    cs.push_back({rng.normal_matrix(3, 5), 0.5 + rng.uniform(),
                  ConstraintSense::kEq, ""});
  }
  const SdpProblem p = make_problem(SymMatrix(5), std::move(cs), 5, 2);
  const SymMatrix z = build_Z(p);

  // Independent accumulation, direct entrywise formula.
  SymMatrix want(5);
  for (const auto& c : p.constraints) {
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        double entry = 0.0;
        for (std::size_t k = 0; k < c.factor.rows(); ++k)
          entry += c.factor(k, i) * c.factor(k, j);
        want(i, j) += c.bound * entry / 6.0;
      }
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(z(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
}

TEST_CASE("build_Z: scale equivariance in the bounds") {
  Rng rng(37);
  std::vector<FactoredConstraint> cs, cs2;
  for (int i = 0; i < 4; ++i) {
    DenseMatrix l = rng.normal_matrix(2, 4);
    const double b = 0.1 + rng.uniform();
    cs.push_back({l, b, ConstraintSense::kEq, ""});
    cs2.push_back({l, 3.0 * b, ConstraintSense::kEq, ""});
  }
  const SymMatrix z1 = build_Z(make_problem(SymMatrix(4), std::move(cs), 4, 1));
  const SymMatrix z2 =
      build_Z(make_problem(SymMatrix(4), std::move(cs2), 4, 1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(z2(i, j) == doctest::Approx(3.0 * z1(i, j)).epsilon(1e-13));
}

TEST_CASE("initialize: identity problem keeps unit scale") {
  const SdpProblem p = make_problem(
      SymMatrix::identity(2),
      {{DenseMatrix::identity(2), 1.0, ConstraintSense::kEq, ""}}, 2, 1);
  const InitReport rep = initialize(p, basic_config());
  CHECK_FALSE(rep.fallback_used);
  CHECK(rep.used_equalities == 1);
  // Z = I, so the leading eigenvalue is ~1 and ||X0|| ~ 1.
  CHECK(frobenius_norm(rep.x0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("initialize: diagonal Z picks the top direction scaled by lambda") {
  // C = I; one EQ constraint whose Gram is diag(4, 1, 1) via factor rows.
  DenseMatrix l(3, 3);
  l(0, 0) = 2.0;
  l(1, 1) = 1.0;
  l(2, 2) = 1.0;
  const SdpProblem p = make_problem(
      SymMatrix::identity(3), {{l, 1.0, ConstraintSense::kEq, ""}}, 3, 1);
  const InitReport rep = initialize(p, basic_config());
  // Z = diag(4,1,1) -> lambda = 4, X0 ~ 4 e1 modulo the epsilon ridge.
  CHECK(rep.leading_eigenvalue == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(std::abs(rep.x0(0, 0)) == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(std::abs(rep.x0(1, 0)) < 1e-6);
  CHECK(std::abs(rep.x0(2, 0)) < 1e-6);
  CHECK(rep.x0(0, 0) > 0.0);  // sign convention propagates
}

TEST_CASE("initialize: change of variables consistency (U^T U = C)") {
  Rng rng(41);
  const DenseMatrix g = rng.normal_matrix(6, 6);
  SymMatrix c = gram(g);
  for (std::size_t i = 0; i < 6; ++i) c(i, i) += 1.0;  // strictly PD
  const SpdFactor u = factor_spd(c);
  const SymMatrix utu = gram(u.upper());
  double err = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const double d = utu(i, j) - c(i, j);
      err += d * d;
    }
  CHECK(std::sqrt(err) <= 1e-10 * frobenius_norm(c));
}

TEST_CASE("initialize: no-equality fallback is seeded and norm-matched") {
  DenseMatrix e1(1, 4);
  e1(0, 0) = 1.0;
  const SdpProblem p = make_problem(
      SymMatrix::identity(4), {{e1, 3.0, ConstraintSense::kLe, ""}}, 4, 2);
  const InitReport a = initialize(p, basic_config(123));
  const InitReport b = initialize(p, basic_config(123));
  const InitReport c = initialize(p, basic_config(124));
  CHECK(a.fallback_used);
  CHECK(a.x0.values() == b.x0.values());   // determinism
  CHECK(a.x0.values() != c.x0.values());   // seed actually matters
  CHECK(frobenius_norm_sq(a.x0) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("initialize: Z is PSD on random problems") {
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<FactoredConstraint> cs;
    for (int i = 0; i < 5; ++i) {
      cs.push_back({rng.normal_matrix(2, 6), rng.uniform() + 0.1,
                    ConstraintSense::kEq, ""});
    }
    const SdpProblem p = make_problem(SymMatrix(6), std::move(cs), 6, 2);
    const SymMatrix z = build_Z(p);
    const double lambda_min = min_eigenvalue(z);
    const double lambda_max = spectral_norm(z);
    CHECK(lambda_min >= -1e-10 * std::max(1.0, lambda_max));
  }
}

TEST_CASE("initialize: phase-retrieval style alignment across seeds") {
  // Rank-1 recovery with many Gaussian rank-1 equality constraints: the
  // initializer should land within a bounded angle of the planted vector on
  // nearly every seed.
  const std::size_t n = 32;
  const std::size_t m = 300;
  int aligned = 0;
  const int seeds = 50;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(1000 + seed);
    std::vector<double> x_star(n);
    for (double& v : x_star) v = rng.normal();
    std::vector<FactoredConstraint> cs;
    cs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      DenseMatrix row = rng.normal_matrix(1, n);
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += row(0, j) * x_star[j];
      cs.push_back({std::move(row), v * v, ConstraintSense::kEq, ""});
    }
    const SdpProblem p =
        make_problem(SymMatrix::identity(n), std::move(cs), n, 1);
    const InitReport rep = initialize(p, basic_config(seed));
    double num = 0.0;
    for (std::size_t j = 0; j < n; ++j) num += rep.x0(j, 0) * x_star[j];
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = rep.x0(j, 0);
    const double cosine = std::abs(num) / (norm2(col) * norm2(x_star));
    if (cosine >= 0.7) ++aligned;
  }
  CHECK(aligned >= 45);  // >= 90% of 50 seeds
}
