#pragma once

#include <Eigen/Core>

#include "hesseq/errors.hpp"

namespace hesseq {

// A point of eigenvalue space (lambda_1, ..., lambda_n), n >= 2.
using EigenTuple = Eigen::VectorXd;

enum class ConeKind { GammaK, PConeK };

// Open symmetric cone in R^n with vertex at the origin.
//   GammaK: all sigma_j(lambda) > 0 for j = 1..k
//   PConeK: every sum of k distinct components is > 0
// Membership is strict; boundary points are not members.
struct ConeSpec {
  ConeKind kind;
  int n;
  int k;

  static ConeSpec gamma(int n, int k);
  static ConeSpec p_cone(int n, int k);
};

enum class OperatorFamily { SigmaKRoot, SigmaRatio, LogPK };

// One of the three concrete symmetric operator families:
//   SigmaKRoot:  f = sigma_k^{1/k}                 on Gamma_k
//   SigmaRatio:  f = (sigma_k/sigma_l)^{1/(k-l)}   on Gamma_k, l < k
//   LogPK:       f = log prod (k-term sums)        on P_k
// The first two are positively homogeneous of degree 1; LogPK satisfies
// f(t*lambda) = binom(n,k)*log(t) + f(lambda).
struct OperatorSpec {
  OperatorFamily family;
  int n;
  int k;
  int l = 0;  // SigmaRatio only

  static OperatorSpec sigma_k_root(int n, int k);
  static OperatorSpec sigma_ratio(int n, int k, int l);
  static OperatorSpec log_p_k(int n, int k);

  ConeSpec cone() const;
  bool degree_one() const { return family != OperatorFamily::LogPK; }
  // Coefficient of log(t) under radial scaling (LogPK only).
  double log_scaling_constant() const;
  std::string name() const;
};

// binom(n, k) as an exact double for the sizes used here.
double binomial(int n, int k);

// k-th elementary symmetric polynomial. k = 0 gives 1; k > n is an error.
// Computed by the O(n^2) recurrence on the coefficients of prod (x + lambda_i).
double elementary_symmetric(const EigenTuple& lambda, int k);

// e_0 .. e_kmax of lambda as a vector of length kmax + 1 (same recurrence).
Eigen::VectorXd elementary_symmetric_all(const EigenTuple& lambda, int kmax);

// Elementary symmetric polynomials of the tuple with one entry deleted,
// e_0 .. e_{kmax-1} of (lambda | value), from the full table via
//   e_j(lambda|i) = e_j(lambda) - lambda_i * e_{j-1}(lambda|i).
// `esf_full` must hold e_0 .. e_kmax of the full tuple.
Eigen::VectorXd esf_excluding(const Eigen::VectorXd& esf_full, double value);

struct ConeCheck {
  bool inside;
  double margin;     // minimum of the tested quantities (sigma_j or k-sums)
  int worst_index;   // Gamma_k: the order j achieving the minimum; PConeK: 0
};

// Strict membership test with margin. Never throws.
ConeCheck cone_contains(const ConeSpec& cone, const EigenTuple& lambda);

// Throws ConeError if lambda is not strictly inside op's cone.
void require_in_cone(const OperatorSpec& op, const EigenTuple& lambda);

// f(lambda). Requires lambda in the cone interior.
double f_eval(const OperatorSpec& op, const EigenTuple& lambda);

// Analytic partial derivatives (f_1, ..., f_n); strictly positive on the cone.
Eigen::VectorXd f_grad(const OperatorSpec& op, const EigenTuple& lambda);

// The point t*direction on the ray with f(t*direction) = sigma, computed from
// (log-)homogeneity: t = sigma/f(d) for degree-1 families,
// t = exp((sigma - f(d))/binom(n,k)) for LogPK. No root-finding.
EigenTuple level_ray_point(const OperatorSpec& op, const EigenTuple& direction,
                           double sigma);

// Unit outward normal Df/|Df| of the level surface of f through lambda.
Eigen::VectorXd normal_vector(const OperatorSpec& op, const EigenTuple& lambda);

// sum_i f_i(lambda) (mu_i - lambda_i) - (f(mu) - f(lambda)); nonnegative by
// concavity, zero when mu is on the ray through lambda for degree-1 families.
double tangent_gap(const OperatorSpec& op, const EigenTuple& lambda,
                   const EigenTuple& mu);

// Exact value of the pairwise quotient (f_i - f_j)/(lambda_i - lambda_j) in
// the coincidence limit lambda_i = lambda_j, from the factored closed forms
// (for f = g(sigma_k): f_i - f_j = -g'(sigma_k)(lambda_i - lambda_j)
// sigma_{k-2}(lambda|ij), and analogously for the other families).
// Evaluated at the tuple with entries i and j replaced by their mean.
double divided_difference_limit(const OperatorSpec& op, const EigenTuple& lambda,
                                int i, int j);

}  // namespace hesseq
