// Independent test oracles. These deliberately avoid the library's evaluation
// paths: elementary symmetric polynomials by explicit subset enumeration,
// derivatives by central finite differences.
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
  if (k == 0) {
    std::vector<int> empty;
    visit(empty);
    return;
  }
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

// Sum over k-subsets of products, in exact integer arithmetic.
inline std::int64_t elementary_symmetric_int(const std::vector<std::int64_t>& v,
                                             int k) {
  std::int64_t total = 0;
  for_each_subset(static_cast<int>(v.size()), k, [&](const std::vector<int>& idx) {
    std::int64_t prod = 1;
    for (int i : idx) prod *= v[i];
    total += prod;
  });
  return total;
}

inline double elementary_symmetric_enum(const Eigen::VectorXd& v, int k) {
  double total = 0.0;
  for_each_subset(static_cast<int>(v.size()), k, [&](const std::vector<int>& idx) {
    double prod = 1.0;
    for (int i : idx) prod *= v(i);
    total += prod;
  });
  return total;
}

// Central-difference gradient with the step scaled by the point's size.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x,
                                   double step_scale = 1e-5) {
  const double h = step_scale * (1.0 + x.norm());
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
