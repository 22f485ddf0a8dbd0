#include <doctest.h>

#include <cmath>

#include "hesseq/rng.hpp"
#include "hesseq/sampling.hpp"
#include "hesseq/spectral.hpp"
#include "oracles.hpp"

using namespace hesseq;

namespace {

// Random rotation from composed Givens rotations (deterministic).
Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (int p = 0; p < n - 1; ++p) {
    for (int r = p + 1; r < n; ++r) {
      const double a = rng.uniform(0.0, 6.283185307179586);
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
      g(p, p) = std::cos(a);
      g(r, r) = std::cos(a);
      g(p, r) = std::sin(a);
      g(r, p) = -std::sin(a);
      q *= g;
    }
  }
  return q;
}

// Admissible random matrix: conjugate a sampled cone tuple by a rotation.
SymMatrix random_admissible(const OperatorSpec& op, Rng& rng,
                            double min_rel_margin = 0.05) {
  SamplingPlan plan;
  plan.r_min = 0.5;
  plan.r_max = 2.0;
  EigenTuple lam = sample_cone_point(op.cone(), rng, plan, min_rel_margin);
  Eigen::MatrixXd q = random_orthogonal(op.n, rng);
  return SymMatrix::from_dense(q * lam.asDiagonal() * q.transpose());
}

}  // namespace

TEST_CASE("sym_eigen basics") {
  auto d = sym_eigen(SymMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(d.eigenvalues(i) == doctest::Approx(1.0));
  CHECK((d.frame - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
        1e-12);

  SymMatrix diag(3);
  diag.at(0, 0) = 3.0;
  diag.at(1, 1) = 1.0;
  diag.at(2, 2) = 2.0;
  d = sym_eigen(diag);
  CHECK(d.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(d.eigenvalues(2) == doctest::Approx(1.0));
  // Permutation frame.
  Eigen::MatrixXd recon =
      d.frame * d.eigenvalues.asDiagonal() * d.frame.transpose();
  CHECK((recon - diag.dense()).cwiseAbs().maxCoeff() <= 1e-12);

  SymMatrix b(2);
  b.at(0, 0) = 2.0;
  b.at(0, 1) = 1.0;
  b.at(1, 1) = 2.0;
  d = sym_eigen(b);
  CHECK(d.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(d.frame(0, 0)) == doctest::Approx(s));
  CHECK(std::abs(std::abs(d.frame(0, 1)) - s) <= 1e-12);
}

TEST_CASE("sym_eigen invariants on random symmetric matrices") {
  for (int i = 0; i < 300; ++i) {
    Rng rng = substream(23, 30, i);
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    SymMatrix b(n);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) b.at(r, c) = rng.uniform(-3.0, 3.0);
    auto d = sym_eigen(b);
    Eigen::MatrixXd qtq = d.frame.transpose() * d.frame;
    CHECK((qtq - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::MatrixXd recon =
        d.frame * d.eigenvalues.asDiagonal() * d.frame.transpose();
    CHECK((recon - b.dense()).cwiseAbs().maxCoeff() <=
          1e-9 * (1.0 + b.max_abs()));
    for (int j = 0; j + 1 < n; ++j)
      CHECK(d.eigenvalues(j) >= d.eigenvalues(j + 1));
  }
}

TEST_CASE("F_eval and conjugation invariance") {
  auto ma2 = OperatorSpec::sigma_k_root(2, 2);
  CHECK(F_eval(ma2, SymMatrix::identity(2)) == doctest::Approx(1.0));

  SymMatrix b(2);
  b.at(0, 0) = 2.0;
  b.at(0, 1) = 1.0;
  b.at(1, 1) = 2.0;
  CHECK(F_eval(ma2, b) == doctest::Approx(std::sqrt(3.0)));

  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  for (int i = 0; i < 100; ++i) {
    Rng rng = substream(29, 31, i);
    SymMatrix m = random_admissible(s2, rng);
    Eigen::MatrixXd q = random_orthogonal(3, rng);
    SymMatrix conj = SymMatrix::from_dense(q * m.dense() * q.transpose());
    CHECK(std::abs(F_eval(s2, conj) - F_eval(s2, m)) <= 1e-9);
    // F_grad conjugates the same way.
    Eigen::MatrixXd lhs = F_grad(s2, conj).dense();
    Eigen::MatrixXd rhs = q * F_grad(s2, m).dense() * q.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("F_grad structure") {
  // Trace family: derivative is the identity for any admissible argument.
  auto s1 = OperatorSpec::sigma_k_root(3, 1);
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(31, 32, i);
    SymMatrix b = random_admissible(s1, rng);
    Eigen::MatrixXd g = F_grad(s1, b).dense();
    CHECK((g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // Diagonal argument: diagonal derivative matrix with entries f_i.
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  SymMatrix diag(3);
  diag.at(0, 0) = 3.0;
  diag.at(1, 1) = 2.0;
  diag.at(2, 2) = 1.0;
  Eigen::MatrixXd g = F_grad(s2, diag).dense();
  EigenTuple lam(3);
  lam << 3, 2, 1;
  Eigen::VectorXd f = f_grad(s2, lam);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(g(r, c) == doctest::Approx(r == c ? f(r) : 0.0).epsilon(1e-12));
}

TEST_CASE("F_grad matches finite differences entrywise") {
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  for (int rep = 0; rep < 25; ++rep) {
    Rng rng = substream(37, 33, rep);
    SymMatrix b = random_admissible(s2, rng);
    SymMatrix g = F_grad(s2, b);
    const double h = 1e-6 * (1.0 + b.max_abs());
    for (int r = 0; r < 3; ++r) {
      for (int c = r; c < 3; ++c) {
        SymMatrix bp = b, bm = b;
        bp.at(r, c) += h;
        bm.at(r, c) -= h;
        // Packed storage perturbs both (r,c) and (c,r) at once, so the
        // directional derivative picks up the full symmetric pair.
        const double fd = (F_eval(s2, bp) - F_eval(s2, bm)) / (2.0 * h);
        const double expected = (r == c) ? g(r, c) : 2.0 * g(r, c);
        CHECK(oracle::rel_err(fd, expected) <= 1e-6);
      }
    }
  }
}

TEST_CASE("trace identities and positive definiteness") {
  std::vector<OperatorSpec> ops = {OperatorSpec::sigma_k_root(3, 2),
                                   OperatorSpec::sigma_ratio(3, 2, 1),
                                   OperatorSpec::log_p_k(3, 2)};
  for (const auto& op : ops) {
    for (int i = 0; i < 100; ++i) {
      Rng rng = substream(41, 34, i);
      SymMatrix b = random_admissible(op, rng);
      auto d = sym_eigen(b);
      Eigen::VectorXd f = f_grad(op, d.eigenvalues);
      Eigen::MatrixXd g = F_grad(op, b).dense();
      const double t1 = (g * b.dense()).trace();
      const double expect1 = f.dot(d.eigenvalues);
      CHECK(std::abs(t1 - expect1) <= 1e-9 * (1.0 + std::abs(expect1)));
      const double t2 = (g * b.dense() * b.dense()).trace();
      const double expect2 = f.dot(d.eigenvalues.cwiseProduct(d.eigenvalues));
      CHECK(std::abs(t2 - expect2) <= 1e-9 * (1.0 + std::abs(expect2)));
      // Positive definiteness via the eigenvalues of the derivative matrix.
      CHECK(f.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("midpoint concavity at matrix level") {
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  for (int i = 0; i < 500; ++i) {
    Rng rng = substream(43, 35, i);
    SymMatrix a = random_admissible(s2, rng);
    SymMatrix b = random_admissible(s2, rng);
    SymMatrix mid = a;
    mid += b;
    mid *= 0.5;
    if (!cone_contains(s2.cone(), sym_eigen(mid).eigenvalues).inside) continue;
    CHECK(F_eval(s2, mid) >=
          0.5 * (F_eval(s2, a) + F_eval(s2, b)) - 1e-10);
  }
}

TEST_CASE("divided differences") {
  // Constant gradient: the table vanishes.
  auto s1 = OperatorSpec::sigma_k_root(2, 1);
  SymMatrix d21(2);
  d21.at(0, 0) = 2.0;
  d21.at(1, 1) = 1.0;
  Eigen::MatrixXd t = divided_differences(s1, d21);
  CHECK(t(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  // Coincident eigenvalues exercise the limit branch, output stays finite.
  std::vector<OperatorSpec> ops = {OperatorSpec::sigma_k_root(3, 2),
                                   OperatorSpec::sigma_ratio(3, 2, 1),
                                   OperatorSpec::log_p_k(3, 2)};
  for (const auto& op : ops) {
    t = divided_differences(op, SymMatrix::identity(3));
    CHECK(t.allFinite());
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  // Reference value and a perturbed-secant cross-check at lambda = (4, 1).
  auto ma2 = OperatorSpec::sigma_k_root(2, 2);
  SymMatrix d41(2);
  d41.at(0, 0) = 4.0;
  d41.at(1, 1) = 1.0;
  t = divided_differences(ma2, d41);
  CHECK(t(0, 1) == doctest::Approx(-0.25));  // (f_1 - f_2)/(4 - 1) = -3/4 / 3
  EigenTuple lam(2);
  lam << 4.0, 1.0;
  const double eps = 1e-4;
  EigenTuple lp = lam, lm = lam;
  lp(1) += eps;
  lm(1) -= eps;
  const double secant =
      (f_grad(ma2, lp)(0) - f_grad(ma2, lp)(1)) / (lp(0) - lp(1));
  const double secant2 =
      (f_grad(ma2, lm)(0) - f_grad(ma2, lm)(1)) / (lm(0) - lm(1));
  CHECK(t(0, 1) == doctest::Approx(0.5 * (secant + secant2)).epsilon(1e-6));

  // The quotient branch and the closed-form limit agree near the threshold.
  for (const auto& op : ops) {
    for (int i = 0; i < 50; ++i) {
      Rng rng = substream(47, 36, i);
      SamplingPlan plan;
      plan.r_min = 0.5;
      plan.r_max = 2.0;
      EigenTuple base = sample_cone_point(op.cone(), rng, plan, 0.1);
      EigenTuple close = base;
      close(1) = close(0) * (1.0 + 1e-6);
      if (!cone_contains(op.cone(), close).inside) continue;
      Eigen::VectorXd g = f_grad(op, close);
      const double quotient = (g(0) - g(1)) / (close(0) - close(1));
      const double limit = divided_difference_limit(op, close, 0, 1);
      CHECK(oracle::rel_err(quotient, limit) <= 1e-5);
    }
  }
}
