#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace hesseq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong call: inapplicable condition id, invalid order k > n, band outside the
// operator's range, monitoring an unconverged state, and the like.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A point failed strict cone membership. Carries the violated inequality index
// (for Gamma_k cones: the order j of the first nonpositive sigma_j).
class ConeError : public Error {
 public:
  ConeError(const std::string& msg, Eigen::VectorXd lambda, int violated_index,
            double margin)
      : Error(msg),
        lambda(std::move(lambda)),
        violated_index(violated_index),
        margin(margin) {}
  Eigen::VectorXd lambda;
  int violated_index;
  double margin;
};

// A grid node left the admissible set. Carries the node and eigenvalues there.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& msg, long node, Eigen::VectorXd lambda,
                     double margin)
      : Error(msg), node(node), lambda(std::move(lambda)), margin(margin) {}
  long node;
  Eigen::VectorXd lambda;
  double margin;
};

// Eigensolver sweep cap exceeded, linear-solve breakdown, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A plugin lacks a derivative the caller needs.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Collects every problem found while validating a config, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> msgs)
      : Error(join(msgs)), messages(std::move(msgs)) {}
  std::vector<std::string> messages;

 private:
  static std::string join(const std::vector<std::string>& msgs) {
    std::string out;
    for (const auto& m : msgs) {
      if (!out.empty()) out += "\n";
      out += m;
    }
    return out;
  }
};

}  // namespace hesseq
