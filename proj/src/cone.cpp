#include "hesseq/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace hesseq {

namespace {

void validate_tuple(const EigenTuple& lambda, int n) {
  if (lambda.size() != n) {
    std::ostringstream os;
    os << "eigenvalue tuple has length " << lambda.size() << ", expected " << n;
    throw UsageError(os.str());
  }
  if (!lambda.allFinite()) throw UsageError("eigenvalue tuple has non-finite entries");
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConeSpec ConeSpec::gamma(int n, int k) {
  if (n < 2) throw UsageError("cone dimension must be >= 2");
  if (k < 1 || k > n) throw UsageError("cone order k must satisfy 1 <= k <= n");
  return ConeSpec{ConeKind::GammaK, n, k};
}

ConeSpec ConeSpec::p_cone(int n, int k) {
  if (n < 2) throw UsageError("cone dimension must be >= 2");
  if (k < 1 || k > n) throw UsageError("cone order k must satisfy 1 <= k <= n");
  return ConeSpec{ConeKind::PConeK, n, k};
}

OperatorSpec OperatorSpec::sigma_k_root(int n, int k) {
  ConeSpec::gamma(n, k);  // validates (n, k)
  return OperatorSpec{OperatorFamily::SigmaKRoot, n, k, 0};
}

OperatorSpec OperatorSpec::sigma_ratio(int n, int k, int l) {
  ConeSpec::gamma(n, k);
  if (l < 1 || l >= k) throw UsageError("sigma_ratio requires 1 <= l < k");
  return OperatorSpec{OperatorFamily::SigmaRatio, n, k, l};
}

OperatorSpec OperatorSpec::log_p_k(int n, int k) {
  ConeSpec::p_cone(n, k);
  return OperatorSpec{OperatorFamily::LogPK, n, k, 0};
}

ConeSpec OperatorSpec::cone() const {
  if (family == OperatorFamily::LogPK) return ConeSpec::p_cone(n, k);
  return ConeSpec::gamma(n, k);
}

double OperatorSpec::log_scaling_constant() const {
  if (family != OperatorFamily::LogPK)
    throw UsageError("log_scaling_constant applies to the LogPK family only");
  return binomial(n, k);
}

std::string OperatorSpec::name() const {
  std::ostringstream os;
  switch (family) {
    case OperatorFamily::SigmaKRoot: os << "sigma_k_root(n=" << n << ",k=" << k << ")"; break;
    case OperatorFamily::SigmaRatio: os << "sigma_ratio(n=" << n << ",k=" << k << ",l=" << l << ")"; break;
    case OperatorFamily::LogPK:      os << "log_p_k(n=" << n << ",k=" << k << ")"; break;
  }
  return os.str();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return std::round(r);
}

Eigen::VectorXd elementary_symmetric_all(const EigenTuple& lambda, int kmax) {
  const int n = static_cast<int>(lambda.size());
  if (kmax < 0 || kmax > n) throw UsageError("elementary symmetric order out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(kmax + 1);
  e(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::min(kmax, i + 1); j >= 1; --j) e(j) += lambda(i) * e(j - 1);
  }
  return e;
}

double elementary_symmetric(const EigenTuple& lambda, int k) {
  if (k == 0) return 1.0;
  if (k < 0 || k > lambda.size()) throw UsageError("elementary symmetric order out of range");
  return elementary_symmetric_all(lambda, k)(k);
}

Eigen::VectorXd esf_excluding(const Eigen::VectorXd& esf_full, double value) {
  const int m = static_cast<int>(esf_full.size()) - 1;
  if (m < 1) throw UsageError("esf_excluding needs a table of order >= 1");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  out(0) = 1.0;
  for (int j = 1; j < m; ++j) out(j) = esf_full(j) - value * out(j - 1);
  return out;
}

ConeCheck cone_contains(const ConeSpec& cone, const EigenTuple& lambda) {
  validate_tuple(lambda, cone.n);
  if (cone.kind == ConeKind::GammaK) {
    Eigen::VectorXd e = elementary_symmetric_all(lambda, cone.k);
    double margin = std::numeric_limits<double>::infinity();
    int worst = 1;
    for (int j = 1; j <= cone.k; ++j) {
      if (e(j) < margin) {
        margin = e(j);
        worst = j;
      }
    }
    return ConeCheck{margin > 0.0, margin, worst};
  }
  // PConeK: the minimal k-term sum is the sum of the k smallest components.
  std::vector<double> sorted(lambda.data(), lambda.data() + lambda.size());
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (int i = 0; i < cone.k; ++i) s += sorted[i];
  return ConeCheck{s > 0.0, s, 0};
}

void require_in_cone(const OperatorSpec& op, const EigenTuple& lambda) {
  ConeCheck c = cone_contains(op.cone(), lambda);
  if (!c.inside) {
    std::ostringstream os;
    os << "point outside admissible cone for " << op.name() << ": margin " << c.margin;
    if (op.cone().kind == ConeKind::GammaK) os << " at order " << c.worst_index;
    throw ConeError(os.str(), lambda, c.worst_index, c.margin);
  }
}

double f_eval(const OperatorSpec& op, const EigenTuple& lambda) {
  require_in_cone(op, lambda);
  switch (op.family) {
    case OperatorFamily::SigmaKRoot: {
      double s = elementary_symmetric(lambda, op.k);
      return std::pow(s, 1.0 / op.k);
    }
    case OperatorFamily::SigmaRatio: {
      Eigen::VectorXd e = elementary_symmetric_all(lambda, op.k);
      return std::pow(e(op.k) / e(op.l), 1.0 / (op.k - op.l));
    }
    case OperatorFamily::LogPK: {
      double acc = 0.0;
      for_each_subset(op.n, op.k, [&](const std::vector<int>& idx) {
        double s = 0.0;
        for (int i : idx) s += lambda(i);
        acc += std::log(s);
      });
      return acc;
    }
  }
  throw UsageError("unknown operator family");
}

Eigen::VectorXd f_grad(const OperatorSpec& op, const EigenTuple& lambda) {
  require_in_cone(op, lambda);
  const int n = op.n;
  Eigen::VectorXd g(n);
  switch (op.family) {
    case OperatorFamily::SigmaKRoot: {
      Eigen::VectorXd e = elementary_symmetric_all(lambda, op.k);
      const double s = e(op.k);
      const double c = std::pow(s, 1.0 / op.k - 1.0) / op.k;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd del = esf_excluding(e, lambda(i));
        g(i) = c * del(op.k - 1);
      }
      return g;
    }
    case OperatorFamily::SigmaRatio: {
      Eigen::VectorXd e = elementary_symmetric_all(lambda, op.k);
      const double sk = e(op.k), sl = e(op.l);
      const double f = std::pow(sk / sl, 1.0 / (op.k - op.l));
      const double c = f / (op.k - op.l);
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd del = esf_excluding(e, lambda(i));
        g(i) = c * (del(op.k - 1) / sk - del(op.l - 1) / sl);
      }
      return g;
    }
    case OperatorFamily::LogPK: {
      g.setZero();
      for_each_subset(op.n, op.k, [&](const std::vector<int>& idx) {
        double s = 0.0;
        for (int i : idx) s += lambda(i);
        for (int i : idx) g(i) += 1.0 / s;
      });
      return g;
    }
  }
  throw UsageError("unknown operator family");
}

EigenTuple level_ray_point(const OperatorSpec& op, const EigenTuple& direction,
                           double sigma) {
  const double fd = f_eval(op, direction);  // also checks cone membership
  double t;
  if (op.degree_one()) {
    if (sigma <= 0.0)
      throw UsageError("level value must be positive for a degree-1 family");
    t = sigma / fd;
  } else {
    t = std::exp((sigma - fd) / op.log_scaling_constant());
  }
  return t * direction;
}

Eigen::VectorXd normal_vector(const OperatorSpec& op, const EigenTuple& lambda) {
  Eigen::VectorXd g = f_grad(op, lambda);
  return g / g.norm();
}

double tangent_gap(const OperatorSpec& op, const EigenTuple& lambda,
                   const EigenTuple& mu) {
  Eigen::VectorXd g = f_grad(op, lambda);
  return g.dot(mu - lambda) - (f_eval(op, mu) - f_eval(op, lambda));
}

double divided_difference_limit(const OperatorSpec& op, const EigenTuple& lambda,
                                int i, int j) {
  require_in_cone(op, lambda);
  if (i == j) throw UsageError("divided difference needs distinct indices");
  EigenTuple merged = lambda;
  const double mean = 0.5 * (lambda(i) + lambda(j));
  merged(i) = mean;
  merged(j) = mean;
  switch (op.family) {
    case OperatorFamily::SigmaKRoot: {
      Eigen::VectorXd e = elementary_symmetric_all(merged, op.k);
      const double s = e(op.k);
      const double gp = std::pow(s, 1.0 / op.k - 1.0) / op.k;  // g'(sigma_k)
      if (op.k < 2) return 0.0;                                // f linear
      Eigen::VectorXd di = esf_excluding(e, merged(i));
      Eigen::VectorXd dij = esf_excluding(di, merged(j));
      return -gp * dij(op.k - 2);
    }
    case OperatorFamily::SigmaRatio: {
      Eigen::VectorXd e = elementary_symmetric_all(merged, op.k);
      const double sk = e(op.k), sl = e(op.l);
      const double f = std::pow(sk / sl, 1.0 / (op.k - op.l));
      Eigen::VectorXd di = esf_excluding(e, merged(i));
      Eigen::VectorXd dij = esf_excluding(di, merged(j));
      const double term_k = (op.k >= 2) ? dij(op.k - 2) / sk : 0.0;
      const double term_l = (op.l >= 2) ? dij(op.l - 2) / sl : 0.0;
      return -f / (op.k - op.l) * (term_k - term_l);
    }
    case OperatorFamily::LogPK: {
      // Pair subsets T of size k-1 avoiding {i, j}:
      //   (f_i - f_j)/(lambda_i - lambda_j) = -sum_T 1/(s_{T+i} s_{T+j}).
      if (op.k == op.n) return 0.0;  // single subset contains both indices
      double acc = 0.0;
      std::vector<int> pool;
      for (int m = 0; m < op.n; ++m)
        if (m != i && m != j) pool.push_back(m);
      const int psize = static_cast<int>(pool.size());
      if (op.k - 1 > psize) return 0.0;
      if (op.k - 1 == 0) {
        acc = 1.0 / (merged(i) * merged(j));
      } else {
        for_each_subset(psize, op.k - 1, [&](const std::vector<int>& idx) {
          double t = 0.0;
          for (int m : idx) t += merged(pool[m]);
          acc += 1.0 / ((t + merged(i)) * (t + merged(j)));
        });
      }
      return -acc;
    }
  }
  throw UsageError("unknown operator family");
}

}  // namespace hesseq
