#include <doctest.h>

#include <cmath>

#include "hesseq/cone.hpp"
#include "hesseq/rng.hpp"
#include "hesseq/sampling.hpp"
#include "oracles.hpp"

using namespace hesseq;

namespace {

EigenTuple tuple3(double a, double b, double c) {
  EigenTuple t(3);
  t << a, b, c;
  return t;
}

}  // namespace

TEST_CASE("elementary symmetric matches subset enumeration") {
  CHECK(elementary_symmetric(tuple3(1, 1, 1), 1) == doctest::Approx(3.0));
  CHECK(elementary_symmetric(tuple3(1, 2, 3), 2) == doctest::Approx(11.0));
  CHECK(elementary_symmetric(tuple3(1, 1, 0), 3) == doctest::Approx(0.0));
  CHECK(elementary_symmetric(tuple3(5, -2, 7), 0) == 1.0);

  // Random integer tuples, exact agreement (all intermediates are integers
  // well inside the exact double range).
  for (int n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      Rng rng = substream(77, n, rep);
      std::vector<std::int64_t> vi(n);
      Eigen::VectorXd vd(n);
      for (int i = 0; i < n; ++i) {
        vi[i] = static_cast<std::int64_t>(rng.next_u64() % 19) - 9;
        vd(i) = static_cast<double>(vi[i]);
      }
      for (int k = 0; k <= n; ++k) {
        const double expected =
            static_cast<double>(oracle::elementary_symmetric_int(vi, k));
        CHECK(elementary_symmetric(vd, k) == expected);
      }
    }
  }

  CHECK_THROWS_AS(elementary_symmetric(tuple3(1, 1, 1), 4), UsageError);
}

TEST_CASE("cone membership and margins") {
  ConeSpec g2 = ConeSpec::gamma(3, 2);
  auto c = cone_contains(g2, tuple3(1, 1, 1));
  CHECK(c.inside);
  CHECK(c.margin == doctest::Approx(3.0));

  c = cone_contains(g2, tuple3(-1, 3, 3));
  CHECK(c.inside);
  CHECK(c.margin == doctest::Approx(3.0));  // sigma_1 = 5, sigma_2 = 3

  c = cone_contains(g2, tuple3(-1, 1, 1));
  CHECK_FALSE(c.inside);
  CHECK(c.margin == doctest::Approx(-1.0));
  CHECK(c.worst_index == 2);

  // Boundary points are not members.
  c = cone_contains(g2, tuple3(0, 0, 5));
  CHECK_FALSE(c.inside);

  ConeSpec p2 = ConeSpec::p_cone(3, 2);
  c = cone_contains(p2, tuple3(-1, 2, 3));
  CHECK(c.inside);
  CHECK(c.margin == doctest::Approx(1.0));  // smallest pair sum
  c = cone_contains(p2, tuple3(-3, 2, 3));
  CHECK_FALSE(c.inside);
}

TEST_CASE("f_eval on the three families") {
  auto ma3 = OperatorSpec::sigma_k_root(3, 3);
  CHECK(f_eval(ma3, tuple3(1, 1, 1)) == doctest::Approx(1.0));

  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  CHECK(f_eval(s2, tuple3(1, 1, 1)) == doctest::Approx(std::sqrt(3.0)));

  auto lp = OperatorSpec::log_p_k(3, 2);
  CHECK(f_eval(lp, tuple3(1, 1, 1)) == doctest::Approx(std::log(8.0)));

  auto ratio = OperatorSpec::sigma_ratio(3, 2, 1);
  CHECK(f_eval(ratio, tuple3(1, 1, 1)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(f_eval(s2, tuple3(-1, 1, 1)), ConeError);
  try {
    f_eval(s2, tuple3(-1, 1, 1));
  } catch (const ConeError& e) {
    CHECK(e.violated_index == 2);
  }
}

TEST_CASE("f_grad closed forms at reference points") {
  auto ma3 = OperatorSpec::sigma_k_root(3, 3);
  Eigen::VectorXd g = f_grad(ma3, tuple3(1, 1, 1));
  for (int i = 0; i < 3; ++i) CHECK(g(i) == doctest::Approx(1.0 / 3.0));

  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  g = f_grad(s2, tuple3(1, 1, 1));
  for (int i = 0; i < 3; ++i)
    CHECK(g(i) == doctest::Approx(1.0 / std::sqrt(3.0)));

  auto lp = OperatorSpec::log_p_k(3, 2);
  g = f_grad(lp, tuple3(1, 1, 1));
  for (int i = 0; i < 3; ++i) CHECK(g(i) == doctest::Approx(1.0));
}

TEST_CASE("f_grad matches finite differences on random admissible points") {
  std::vector<OperatorSpec> ops = {
      OperatorSpec::sigma_k_root(3, 2), OperatorSpec::sigma_k_root(4, 3),
      OperatorSpec::sigma_ratio(3, 2, 1), OperatorSpec::sigma_ratio(4, 3, 1),
      OperatorSpec::log_p_k(3, 2), OperatorSpec::log_p_k(2, 1)};
  SamplingPlan plan;
  plan.seed = 5;
  plan.r_min = 0.5;
  plan.r_max = 2.0;
  for (const auto& op : ops) {
    for (int i = 0; i < 100; ++i) {
      Rng rng = substream(plan.seed, 3, i);
      EigenTuple lam = sample_cone_point(op.cone(), rng, plan, 0.05);
      Eigen::VectorXd g = f_grad(op, lam);
      Eigen::VectorXd fd = oracle::fd_gradient(
          [&](const Eigen::VectorXd& x) { return f_eval(op, x); }, lam);
      for (int j = 0; j < lam.size(); ++j)
        CHECK(oracle::rel_err(g(j), fd(j)) <= 1e-6);
      CHECK(g.minCoeff() > 0.0);  // ellipticity at every sampled point
    }
  }
}

TEST_CASE("homogeneity") {
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  auto lp = OperatorSpec::log_p_k(3, 2);
  for (int i = 0; i < 200; ++i) {
    Rng rng = substream(11, 4, i);
    SamplingPlan plan;
    plan.r_min = 0.5;
    plan.r_max = 2.0;
    EigenTuple lam = sample_cone_point(s2.cone(), rng, plan);
    const double t = rng.log_uniform(0.01, 100.0);
    CHECK(oracle::rel_err(f_eval(s2, t * lam), t * f_eval(s2, lam)) <= 1e-12);
    if (cone_contains(lp.cone(), lam).inside) {
      const double expect =
          lp.log_scaling_constant() * std::log(t) + f_eval(lp, lam);
      CHECK(oracle::rel_err(f_eval(lp, t * lam), expect) <= 1e-12);
    }
  }
}

TEST_CASE("level_ray_point uses homogeneity exactly") {
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  EigenTuple d = tuple3(1, 1, 1);
  EigenTuple p = level_ray_point(s2, d, 2.0);
  for (int i = 0; i < 3; ++i)
    CHECK(p(i) == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(f_eval(s2, p) == doctest::Approx(2.0));

  auto ma3 = OperatorSpec::sigma_k_root(3, 3);
  p = level_ray_point(ma3, d, 1.0);
  for (int i = 0; i < 3; ++i) CHECK(p(i) == doctest::Approx(1.0));

  auto lp = OperatorSpec::log_p_k(3, 2);
  p = level_ray_point(lp, d, std::log(8.0));
  for (int i = 0; i < 3; ++i) CHECK(p(i) == doctest::Approx(1.0));

  CHECK_THROWS_AS(level_ray_point(s2, d, -1.0), UsageError);
  CHECK_THROWS_AS(level_ray_point(s2, tuple3(-1, 1, 1), 1.0), ConeError);
}

TEST_CASE("normal_vector") {
  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  Eigen::VectorXd nu = normal_vector(s2, tuple3(1, 1, 1));
  for (int i = 0; i < 3; ++i)
    CHECK(nu(i) == doctest::Approx(1.0 / std::sqrt(3.0)));

  auto s1 = OperatorSpec::sigma_k_root(2, 1);
  EigenTuple q(2);
  q << 3.0, 0.5;
  nu = normal_vector(s1, q);
  CHECK(nu(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(nu(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  nu = normal_vector(s2, tuple3(1, 2, 3));
  Eigen::VectorXd expect(3);
  expect << 5, 4, 3;
  expect.normalize();
  for (int i = 0; i < 3; ++i) CHECK(nu(i) == doctest::Approx(expect(i)));
  CHECK(nu.norm() == doctest::Approx(1.0));
  CHECK(nu.minCoeff() > 0.0);
}

TEST_CASE("tangent_gap nonnegative, zero along rays") {
  auto ma3 = OperatorSpec::sigma_k_root(3, 3);
  CHECK(tangent_gap(ma3, tuple3(1, 1, 1), tuple3(1, 1, 1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tangent_gap(ma3, tuple3(1, 1, 1), tuple3(2, 2, 2)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  auto s2 = OperatorSpec::sigma_k_root(3, 2);
  const double gap = tangent_gap(s2, tuple3(1, 1, 1), tuple3(1, 2, 3));
  const double expect = 2.0 * std::sqrt(3.0) - std::sqrt(11.0);
  CHECK(gap == doctest::Approx(expect));
  CHECK(gap > 0.0);

  // Property: nonnegative over random pairs; zero for scaled copies.
  SamplingPlan plan;
  plan.r_min = 0.2;
  plan.r_max = 5.0;
  for (int i = 0; i < 500; ++i) {
    Rng rng = substream(13, 6, i);
    EigenTuple a = sample_cone_point(s2.cone(), rng, plan);
    EigenTuple b = sample_cone_point(s2.cone(), rng, plan);
    CHECK(tangent_gap(s2, a, b) >= -1e-10);
    const double c = rng.log_uniform(0.1, 10.0);
    CHECK(std::abs(tangent_gap(s2, a, c * a)) <= 1e-10 * (1.0 + a.norm()));
  }
}

TEST_CASE("concavity along segments") {
  std::vector<OperatorSpec> ops = {OperatorSpec::sigma_k_root(3, 2),
                                   OperatorSpec::sigma_ratio(3, 2, 1),
                                   OperatorSpec::log_p_k(3, 2)};
  SamplingPlan plan;
  plan.r_min = 0.2;
  plan.r_max = 5.0;
  for (const auto& op : ops) {
    for (int i = 0; i < 2000; ++i) {
      Rng rng = substream(17, 7, i);
      EigenTuple a = sample_cone_point(op.cone(), rng, plan);
      EigenTuple b = sample_cone_point(op.cone(), rng, plan);
      const double t = rng.next_double();
      const double lhs = f_eval(op, t * b + (1.0 - t) * a);
      const double rhs = t * f_eval(op, b) + (1.0 - t) * f_eval(op, a);
      CHECK(lhs >= rhs - 1e-10);
    }
  }
}

TEST_CASE("Maclaurin ordering of normalized roots") {
  // (sigma_k / binom(n,k))^{1/k} nonincreasing in k on positive tuples.
  for (int i = 0; i < 300; ++i) {
    Rng rng = substream(19, 8, i);
    const int n = 3 + static_cast<int>(rng.next_u64() % 3);
    EigenTuple lam(n);
    for (int j = 0; j < n; ++j) lam(j) = rng.log_uniform(0.05, 20.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
      const double v =
          std::pow(elementary_symmetric(lam, k) / binomial(n, k), 1.0 / k);
      CHECK(v <= prev * (1.0 + 1e-12));
      prev = v;
    }
  }
}
