#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>

#include "hesseq/errors.hpp"

namespace hesseq {

// Augmentation tensor A(x, z, p): symmetric bilinear form added to the Hessian
// before the eigenvalue map. Each family provides its value and the z- and
// p-derivatives analytically.
//   Zero:          A = 0
//   KappaUMetric:  A = kappa * z * I
//   UMetric:       A = z * I
//   MtwQuadratic:  A = -(c/2) |p|^2 I, c > 0 (uniformly concave in p
//                  transverse to any direction, with constant c)
enum class ATensorFamily { Zero, KappaUMetric, UMetric, MtwQuadratic };

struct ATensorSpec {
  ATensorFamily family = ATensorFamily::Zero;
  double kappa = 1.0;  // KappaUMetric
  double c = 1.0;      // MtwQuadratic

  static ATensorSpec zero() { return {ATensorFamily::Zero, 0.0, 0.0}; }
  static ATensorSpec kappa_u_metric(double kappa) {
    return {ATensorFamily::KappaUMetric, kappa, 0.0};
  }
  static ATensorSpec u_metric() { return {ATensorFamily::UMetric, 1.0, 0.0}; }
  static ATensorSpec mtw_quadratic(double c);

  std::string name() const;

  // A^{ij}(x, z, p) as a dense symmetric matrix of size p.size().
  Eigen::MatrixXd value(const Eigen::VectorXd& x, double z,
                        const Eigen::VectorXd& p) const;
  // dA^{ij}/dz.
  Eigen::MatrixXd z_derivative(const Eigen::VectorXd& x, double z,
                               const Eigen::VectorXd& p) const;
  // dA^{ij}/dp_m for a fixed m.
  Eigen::MatrixXd p_derivative(const Eigen::VectorXd& x, double z,
                               const Eigen::VectorXd& p, int m) const;
  // Contraction A^{xi xi}_{p_m p_r} eta_m eta_r for given xi, eta.
  double pp_form(const Eigen::VectorXd& x, double z, const Eigen::VectorXd& p,
                 const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) const;
  // A^{xi eta}(x, z, p).
  double bilinear(const Eigen::VectorXd& x, double z, const Eigen::VectorXd& p,
                  const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) const;

  bool z_derivative_nonnegative() const;
};

// Right-hand side psi(x, z, p) > 0.
//   Constant:     psi = value
//   SpatialTable: psi = table(node); bound to a grid, x is a node index
//   Separable:    psi = base(x) * exp(-m z), m >= 0 (so psi_z <= 0)
enum class PsiFamily { Constant, SpatialTable, Separable };

struct PsiSpec {
  PsiFamily family = PsiFamily::Constant;
  double constant = 1.0;
  double m = 0.0;                           // Separable decay rate
  std::shared_ptr<const Eigen::VectorXd> table;  // SpatialTable / Separable base

  static PsiSpec constant_value(double v);
  static PsiSpec spatial_table(std::shared_ptr<const Eigen::VectorXd> t);
  static PsiSpec separable(double base, double m);
  static PsiSpec separable_table(std::shared_ptr<const Eigen::VectorXd> t, double m);

  std::string name() const;

  // node < 0 uses the constant base; otherwise indexes the table.
  double value(long node, double z, const Eigen::VectorXd& p) const;
  double z_derivative(long node, double z, const Eigen::VectorXd& p) const;
  double p_derivative(long node, double z, const Eigen::VectorXd& p, int m) const;

  bool z_derivative_nonpositive() const { return true; }  // all three families
  bool spatial() const { return family == PsiFamily::SpatialTable || table != nullptr; }
};

// Exponents substituted into the growth-condition audits, with the bounding
// functions and the floor constants of the large-gradient positivity bound.
struct GrowthSpec {
  double gamma1 = 2.0;
  double gamma2 = 2.0;
  double gamma = 1.0;
  double c1 = 0.5;   // required lower bound psi >= c1 for |p| >= K
  double K = 10.0;
  std::function<double(const Eigen::VectorXd&, double)> psi_bar1 =
      [](const Eigen::VectorXd&, double) { return 1.0; };
  std::function<double(const Eigen::VectorXd&, double)> psi_bar2 =
      [](const Eigen::VectorXd&, double) { return 1.0; };
  std::function<double(const Eigen::VectorXd&, double)> psi_bar =
      [](const Eigen::VectorXd&, double) { return 1.0; };

  void validate() const {
    if (!(gamma1 > 0.0 && gamma2 > 0.0 && gamma > 0.0))
      throw UsageError("growth exponents must be positive");
  }
};

}  // namespace hesseq
