#include "hesseq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace hesseq {

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw UsageError("from_dense needs a square matrix");
  SymMatrix out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.n_; ++i)
    for (int j = i; j < out.n_; ++j) out.at(i, j) = 0.5 * (m(i, j) + m(j, i));
  return out;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) m(i, j) = m(j, i) = (*this)(i, j);
  return m;
}

double SymMatrix::frobenius() const { return dense().norm(); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.n_ != n_) throw UsageError("size mismatch in SymMatrix sum");
  a_ += other.a_;
  return *this;
}

SpectralDecomp sym_eigen(const SymMatrix& b) {
  if (!b.all_finite()) throw UsageError("matrix has non-finite entries");
  const int n = b.size();
  Eigen::MatrixXd a = b.dense();
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  const double norm = a.norm();
  const double threshold = 1e-14 * norm;
  const int max_sweeps = 50;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    off = std::sqrt(2.0 * off);
    if (off <= threshold || norm == 0.0) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        if (std::abs(a(p, r)) <= threshold / (n * n)) continue;
        const double apq = a(p, r);
        const double tau = (a(r, r) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
        rot(p, p) = c;
        rot(r, r) = c;
        rot(p, r) = s;
        rot(r, p) = -s;
        a = rot.transpose() * a * rot;
        a(p, r) = a(r, p) = 0.0;
        q = q * rot;
      }
    }
  }
  if (sweep == max_sweeps) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    std::ostringstream os;
    os << "Jacobi eigensolver hit the sweep cap; off-diagonal residual "
       << std::sqrt(2.0 * off);
    throw NumericalError(os.str());
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  SpectralDecomp d;
  d.eigenvalues.resize(n);
  d.frame.resize(n, n);
  for (int c = 0; c < n; ++c) {
    d.eigenvalues(c) = a(order[c], order[c]);
    Eigen::VectorXd v = q.col(order[c]);
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    d.frame.col(c) = v;
  }
  return d;
}

namespace {

// Decomposes and checks admissibility, reporting the node-free matrix context.
SpectralDecomp admissible_decomp(const OperatorSpec& op, const SymMatrix& b) {
  SpectralDecomp d = sym_eigen(b);
  require_in_cone(op, d.eigenvalues);
  return d;
}

}  // namespace

double F_eval(const OperatorSpec& op, const SymMatrix& b) {
  SpectralDecomp d = admissible_decomp(op, b);
  return f_eval(op, d.eigenvalues);
}

SymMatrix F_grad(const OperatorSpec& op, const SymMatrix& b) {
  SpectralDecomp d = admissible_decomp(op, b);
  Eigen::VectorXd g = f_grad(op, d.eigenvalues);
  Eigen::MatrixXd m = d.frame * g.asDiagonal() * d.frame.transpose();
  return SymMatrix::from_dense(m);
}

Eigen::MatrixXd divided_differences(const OperatorSpec& op, const SymMatrix& b) {
  SpectralDecomp d = admissible_decomp(op, b);
  const EigenTuple& lam = d.eigenvalues;
  Eigen::VectorXd g = f_grad(op, lam);
  const int n = op.n;
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = lam(i) - lam(j);
      double v;
      if (std::abs(gap) <= 1e-8 * (1.0 + std::abs(lam(i)))) {
        v = divided_difference_limit(op, lam, i, j);
      } else {
        v = (g(i) - g(j)) / gap;
      }
      table(i, j) = table(j, i) = v;
    }
  }
  return table;
}

}  // namespace hesseq
