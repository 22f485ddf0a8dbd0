#pragma once

#include <Eigen/Core>

#include "hesseq/cone.hpp"

namespace hesseq {

// Symmetric n x n matrix with a single packed copy of each entry pair
// (upper triangle, row-major). Symmetry is structural, not a runtime promise.
class SymMatrix {
 public:
  SymMatrix() : n_(0) {}
  explicit SymMatrix(int n) : n_(n), a_(Eigen::VectorXd::Zero(n * (n + 1) / 2)) {}

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
  // Symmetrizes (m + m^T)/2; exact for symmetric input.
  static SymMatrix from_dense(const Eigen::MatrixXd& m);

  int size() const { return n_; }

  double operator()(int i, int j) const { return a_(offset(i, j)); }
  double& at(int i, int j) { return a_(offset(i, j)); }

  Eigen::MatrixXd dense() const;
  double max_abs() const { return n_ == 0 ? 0.0 : a_.cwiseAbs().maxCoeff(); }
  double frobenius() const;
  bool all_finite() const { return a_.allFinite(); }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator*=(double s) { a_ *= s; return *this; }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }

 private:
  int offset(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }
  int n_;
  Eigen::VectorXd a_;
};

// Eigenvalues (descending) and an orthonormal frame Q with
// B = Q diag(lambda) Q^T.
struct SpectralDecomp {
  EigenTuple eigenvalues;
  Eigen::MatrixXd frame;
};

// Cyclic Jacobi rotations, threshold 1e-14 * ||B||_F, at most 50 sweeps.
// Deterministic: ties between equal eigenvalues keep index order, each
// eigenvector's largest-magnitude component is made nonnegative.
// Throws NumericalError with the residual if the sweep cap is hit.
SpectralDecomp sym_eigen(const SymMatrix& b);

// F(B) = f(lambda(B)). Invariant under orthogonal conjugation.
double F_eval(const OperatorSpec& op, const SymMatrix& b);

// Derivative matrix of F at B: Q diag(f_i) Q^T. Positive definite on the
// admissible set; satisfies <F_grad(B), B> = sum f_i lambda_i.
SymMatrix F_grad(const OperatorSpec& op, const SymMatrix& b);

// Pairwise table d_ij = (f_i - f_j)/(lambda_i - lambda_j) on the eigenvalues
// of B (descending order, matching sym_eigen). Diagonal entries are zero.
// When |lambda_i - lambda_j| <= 1e-8 (1 + |lambda_i|) the entry is the
// analytic coincidence limit instead of the quotient.
Eigen::MatrixXd divided_differences(const OperatorSpec& op, const SymMatrix& b);

}  // namespace hesseq
