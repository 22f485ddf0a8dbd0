#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hesseq/cone.hpp"
#include "hesseq/plugins.hpp"
#include "hesseq/sampling.hpp"

namespace hesseq {

// Sampled structure conditions. The C3I-* and CgjI* ids cover the operator
// family f (ellipticity, concavity, boundary supremum, Euler sum, tangent
// compactness, diagonal growth, dominant negative-direction derivative); the
// CA* ids and CgjG20xx cover the augmentation tensor A and right-hand side psi
// (p-concavity, uniform transverse concavity, monotonicity in z, growth).
enum class Condition {
  C3I20,
  C3I30,
  C3I40,
  C3I45,
  CgjI100,
  CgjI105,
  C3I50,
  CA1,
  CA2,
  CA3,
  CA4,
  CA5,
  CA6,
  CgjG20xx,
};

std::string condition_id(Condition c);
Condition condition_from_id(const std::string& id);
bool is_operator_condition(Condition c);
bool is_tensor_condition(Condition c);

// Signed tolerance of the verdict rule: violated iff margin < -tolerance.
// Strict conditions (CA3, C3I-50) carry a negative tolerance, so a zero
// margin counts as a violation.
double condition_tolerance(Condition c);

enum class Verdict { Holds, Violated, Inconclusive };
std::string to_string(Verdict v);

// Everything needed to re-evaluate a sampled margin standalone.
struct Witness {
  std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;
  std::vector<std::pair<std::string, double>> scalars;

  const Eigen::VectorXd& vec(const std::string& name) const;
  double scalar(const std::string& name) const;
  bool has_vec(const std::string& name) const;
};

struct AuditReport {
  std::string condition;      // condition id string
  int samples = 0;            // samples evaluated
  int applicable_samples = 0; // samples meeting the condition's side constraint
  double worst_margin = 0.0;
  Witness witness;
  Verdict verdict = Verdict::Inconclusive;
  double estimate = std::numeric_limits<double>::quiet_NaN();  // nu_0 / c_0
  std::string note;
};

// Sampled audit of an operator-side condition (C3I-20/30/40/45, CgjI105,
// C3I-50). Margin semantics:
//   C3I-20:  min_i f_i over cone samples
//   C3I-30:  min midpoint-concavity gap over sampled pairs
//   C3I-40:  -max f over near-boundary samples (f driven below 1e-3)
//   C3I-45:  min sum f_i lambda_i
//   CgjI105: f(t 1) - f(1) at t = 1e6 (holds when >= 1e3)
//   C3I-50:  min over samples with a negative component, rescaled to the
//            f = 1 level, of min_{j: lambda_j < 0} f_j / (1 + sum f_i);
//            reported as the estimate of nu_0
AuditReport audit_operator(const OperatorSpec& op, Condition cond,
                           const SamplingPlan& plan);

// Sampling context for tensor/psi audits.
struct TensorAuditContext {
  int dim = 3;              // length of x and p
  double x_half_width = 1.0;
  double z_lo = -2.0;
  double z_hi = 2.0;
  double required_c0 = 0.0;  // CA3 margin is the estimate minus this
  GrowthSpec growth;
};

// Sampled audit of a tensor-side condition (CA1..CA6, CgjG20xx).
AuditReport audit_tensor(const ATensorSpec& a, const PsiSpec& psi,
                         Condition cond, const SamplingPlan& plan,
                         const TensorAuditContext& ctx = {});

// Tangent-plane compactness probe (CgjI100). Requires f(lambda) > sigma.
// Samples directions tau in the tangent plane of the level surface through
// lambda; each ray lambda + r tau is marched and bisected for a crossing of
// {f = sigma} within probe_radius (the crossing point lies on the
// plane-level intersection, so any crossing certifies nonemptiness).
//   all rays cross     -> Holds,   margin = min remaining budget fraction
//   some rays escape   -> Violated, margin = -(escaped fraction)
//   no ray crosses     -> Inconclusive, margin = -1 (a level set equal to its
//                         tangent plane - the linear case - lands here)
AuditReport check_tangent_compactness(const OperatorSpec& op, double sigma,
                                      const EigenTuple& lambda,
                                      double probe_radius,
                                      const SamplingPlan& plan);

// Re-evaluates the margin of a witness produced by audit_operator or
// check_tangent_compactness.
double reevaluate_margin(const OperatorSpec& op, Condition cond,
                         const Witness& w);
// Same for audit_tensor witnesses.
double reevaluate_tensor_margin(const ATensorSpec& a, const PsiSpec& psi,
                                Condition cond, const Witness& w,
                                const TensorAuditContext& ctx = {});

// Empirical constants of the quantified tangent inequality
//   sum f_i(lambda)(mu_i - lambda_i) >= theta + theta sum f_i + f(mu) - f(lambda)
// for lambda in the band {a <= f <= b} at |lambda| = R and mu in K:
// theta_hat(R) is the sampled minimum of the normalized ratio
//   [sum f_i(lambda)(mu_i - lambda_i) - f(mu) + f(lambda)] / (1 + sum f_i).
struct ThetaEstimate {
  OperatorSpec op;
  std::vector<EigenTuple> K_points;
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::vector<double> R_grid;
  std::vector<double> theta_hat;                              // per radius
  std::vector<std::pair<EigenTuple, EigenTuple>> witnesses;   // (lambda, mu)
  double max_abs_numerator = 0.0;  // over every sample of the whole run

  // First grid radius whose estimate is positive (NaN if none).
  double R_hat() const;
  // Minimum estimate over grid radii >= R_hat() (NaN if none positive).
  double theta_at_R_hat() const;
};

ThetaEstimate estimate_theta(const OperatorSpec& op,
                             const std::vector<EigenTuple>& K,
                             double band_lo, double band_hi,
                             const std::vector<double>& R_grid,
                             const SamplingPlan& plan);

// Gauss-map cap estimate at one radius: the sampled maximum of
// nu_mu . nu_lambda over level-set points at |lambda| = R, together with the
// sampled nearest-point set of the level surface in the direction nu_mu.
struct BetaEstimate {
  double sigma = 0.0;
  double R = 0.0;
  double beta_hat = 0.0;
  EigenTuple beta_witness;
  double nearest_offset = 0.0;  // min nu_mu . (lambda - mu) over the level set
  EigenTuple nearest_point;
};

BetaEstimate beta_R(const OperatorSpec& op, const EigenTuple& mu, double sigma,
                    double R, const SamplingPlan& plan);

}  // namespace hesseq
