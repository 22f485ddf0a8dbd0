#include "hesseq/plugins.hpp"

#include <cmath>

namespace hesseq {

ATensorSpec ATensorSpec::mtw_quadratic(double c) {
  if (!(c > 0.0)) throw UsageError("mtw_quadratic requires c > 0");
  return {ATensorFamily::MtwQuadratic, 0.0, c};
}

std::string ATensorSpec::name() const {
  switch (family) {
    case ATensorFamily::Zero: return "zero";
    case ATensorFamily::KappaUMetric: return "kappa_u_metric";
    case ATensorFamily::UMetric: return "u_metric";
    case ATensorFamily::MtwQuadratic: return "mtw_quadratic";
  }
  return "?";
}

Eigen::MatrixXd ATensorSpec::value(const Eigen::VectorXd&, double z,
                                   const Eigen::VectorXd& p) const {
  const long n = p.size();
  switch (family) {
    case ATensorFamily::Zero: return Eigen::MatrixXd::Zero(n, n);
    case ATensorFamily::KappaUMetric:
      return kappa * z * Eigen::MatrixXd::Identity(n, n);
    case ATensorFamily::UMetric: return z * Eigen::MatrixXd::Identity(n, n);
    case ATensorFamily::MtwQuadratic:
      return -0.5 * c * p.squaredNorm() * Eigen::MatrixXd::Identity(n, n);
  }
  throw UsageError("unknown tensor family");
}

Eigen::MatrixXd ATensorSpec::z_derivative(const Eigen::VectorXd&, double,
                                          const Eigen::VectorXd& p) const {
  const long n = p.size();
  switch (family) {
    case ATensorFamily::Zero: return Eigen::MatrixXd::Zero(n, n);
    case ATensorFamily::KappaUMetric:
      return kappa * Eigen::MatrixXd::Identity(n, n);
    case ATensorFamily::UMetric: return Eigen::MatrixXd::Identity(n, n);
    case ATensorFamily::MtwQuadratic: return Eigen::MatrixXd::Zero(n, n);
  }
  throw UsageError("unknown tensor family");
}

Eigen::MatrixXd ATensorSpec::p_derivative(const Eigen::VectorXd&, double,
                                          const Eigen::VectorXd& p, int m) const {
  const long n = p.size();
  switch (family) {
    case ATensorFamily::Zero:
    case ATensorFamily::KappaUMetric:
    case ATensorFamily::UMetric: return Eigen::MatrixXd::Zero(n, n);
    case ATensorFamily::MtwQuadratic:
      return -c * p(m) * Eigen::MatrixXd::Identity(n, n);
  }
  throw UsageError("unknown tensor family");
}

double ATensorSpec::pp_form(const Eigen::VectorXd&, double,
                            const Eigen::VectorXd&, const Eigen::VectorXd& xi,
                            const Eigen::VectorXd& eta) const {
  switch (family) {
    case ATensorFamily::Zero:
    case ATensorFamily::KappaUMetric:
    case ATensorFamily::UMetric: return 0.0;
    case ATensorFamily::MtwQuadratic:
      return -c * xi.squaredNorm() * eta.squaredNorm();
  }
  throw UsageError("unknown tensor family");
}

double ATensorSpec::bilinear(const Eigen::VectorXd& x, double z,
                             const Eigen::VectorXd& p, const Eigen::VectorXd& xi,
                             const Eigen::VectorXd& eta) const {
  return xi.dot(value(x, z, p) * eta);
}

bool ATensorSpec::z_derivative_nonnegative() const {
  switch (family) {
    case ATensorFamily::Zero:
    case ATensorFamily::UMetric:
    case ATensorFamily::MtwQuadratic: return true;
    case ATensorFamily::KappaUMetric: return kappa >= 0.0;
  }
  return false;
}

PsiSpec PsiSpec::constant_value(double v) {
  if (!(v > 0.0)) throw UsageError("psi must be positive");
  PsiSpec s;
  s.family = PsiFamily::Constant;
  s.constant = v;
  return s;
}

PsiSpec PsiSpec::spatial_table(std::shared_ptr<const Eigen::VectorXd> t) {
  if (!t || t->size() == 0 || t->minCoeff() <= 0.0)
    throw UsageError("psi table must be nonempty and positive");
  PsiSpec s;
  s.family = PsiFamily::SpatialTable;
  s.table = std::move(t);
  return s;
}

PsiSpec PsiSpec::separable(double base, double m) {
  if (!(base > 0.0)) throw UsageError("psi base must be positive");
  if (m < 0.0) throw UsageError("separable psi requires m >= 0");
  PsiSpec s;
  s.family = PsiFamily::Separable;
  s.constant = base;
  s.m = m;
  return s;
}

PsiSpec PsiSpec::separable_table(std::shared_ptr<const Eigen::VectorXd> t,
                                 double m) {
  PsiSpec s = spatial_table(std::move(t));
  s.family = PsiFamily::Separable;
  s.m = (m < 0.0) ? throw UsageError("separable psi requires m >= 0") : m;
  return s;
}

std::string PsiSpec::name() const {
  switch (family) {
    case PsiFamily::Constant: return "constant";
    case PsiFamily::SpatialTable: return "spatial_table";
    case PsiFamily::Separable: return "separable";
  }
  return "?";
}

double PsiSpec::value(long node, double z, const Eigen::VectorXd&) const {
  double base = constant;
  if (table) {
    if (node < 0 || node >= table->size())
      throw UsageError("psi table index out of range");
    base = (*table)(node);
  }
  if (family == PsiFamily::Separable) return base * std::exp(-m * z);
  return base;
}

double PsiSpec::z_derivative(long node, double z, const Eigen::VectorXd& p) const {
  if (family == PsiFamily::Separable) return -m * value(node, z, p);
  return 0.0;
}

double PsiSpec::p_derivative(long, double, const Eigen::VectorXd&, int) const {
  return 0.0;  // no family depends on the gradient
}

}  // namespace hesseq
