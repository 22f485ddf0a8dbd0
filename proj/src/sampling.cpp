#include "hesseq/sampling.hpp"

#include <cmath>
#include <sstream>

namespace hesseq {

std::string to_string(DirectionScheme s) {
  return s == DirectionScheme::UniformOnCone ? "uniform-on-cone" : "diagonal-biased";
}

DirectionScheme direction_scheme_from_string(const std::string& s) {
  if (s == "uniform-on-cone") return DirectionScheme::UniformOnCone;
  if (s == "diagonal-biased") return DirectionScheme::DiagonalBiased;
  throw UsageError("unknown direction scheme: " + s);
}

namespace {

Eigen::VectorXd unit_gaussian(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  double norm = v.norm();
  while (norm < 1e-12) {
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace

Eigen::VectorXd sample_cone_direction(const ConeSpec& cone, Rng& rng,
                                      DirectionScheme scheme) {
  const Eigen::VectorXd diag =
      Eigen::VectorXd::Constant(cone.n, 1.0 / std::sqrt(double(cone.n)));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Eigen::VectorXd d = unit_gaussian(cone.n, rng);
    if (scheme == DirectionScheme::DiagonalBiased) {
      const double w = rng.next_double();
      d = ((1.0 - w) * d + w * diag).normalized();
    }
    if (cone_contains(cone, d).inside) return d;
  }
  throw NumericalError("cone direction rejection sampling failed to terminate");
}

Eigen::VectorXd near_boundary_direction(const ConeSpec& cone, Rng& rng,
                                        DirectionScheme scheme,
                                        double margin_target) {
  Eigen::VectorXd inside = sample_cone_direction(cone, rng, scheme);
  if (cone_contains(cone, inside).margin <= margin_target) return inside;
  // An outside endpoint: flip the sign of one random component repeatedly.
  Eigen::VectorXd outside = inside;
  for (int i = 0; i < 64 && cone_contains(cone, outside).inside; ++i) {
    int j = static_cast<int>(rng.next_u64() % cone.n);
    outside(j) = -std::abs(outside(j)) - 1.0;
    outside.normalize();
  }
  if (cone_contains(cone, outside).inside)
    throw NumericalError("failed to construct an out-of-cone direction");

  double lo = 0.0, hi = 1.0;  // blend parameter toward the outside endpoint
  Eigen::VectorXd best = inside;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::VectorXd d = ((1.0 - mid) * inside + mid * outside);
    const double norm = d.norm();
    if (norm < 1e-12) {
      hi = mid;
      continue;
    }
    d /= norm;
    ConeCheck c = cone_contains(cone, d);
    if (c.inside && c.margin <= margin_target) return d;
    if (c.inside) {
      lo = mid;
      best = d;
    } else {
      hi = mid;
    }
  }
  return best;  // inside, margin as small as the bisection got
}

EigenTuple sample_cone_point(const ConeSpec& cone, Rng& rng,
                             const SamplingPlan& plan, double min_rel_margin) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Eigen::VectorXd d = sample_cone_direction(cone, rng, plan.scheme);
    if (min_rel_margin > 0.0 && cone_contains(cone, d).margin < min_rel_margin)
      continue;
    return rng.log_uniform(plan.r_min, plan.r_max) * d;
  }
  throw NumericalError("interior point sampling failed to terminate");
}

double max_level_at_radius(const OperatorSpec& op, double radius) {
  const Eigen::VectorXd diag =
      Eigen::VectorXd::Constant(op.n, radius / std::sqrt(double(op.n)));
  return f_eval(op, diag);
}

EigenTuple level_point_at_radius(const OperatorSpec& op, double sigma,
                                 double radius, Rng& rng,
                                 DirectionScheme scheme) {
  if (!(radius > 0.0)) throw UsageError("level point radius must be positive");
  const ConeSpec cone = op.cone();
  const Eigen::VectorXd diag =
      Eigen::VectorXd::Constant(op.n, 1.0 / std::sqrt(double(op.n)));
  // Direction-level target: f(radius * d) = sigma.
  auto level_at = [&](const Eigen::VectorXd& d) { return f_eval(op, radius * d); };

  const double top = level_at(diag);
  if (sigma > top) {
    std::ostringstream os;
    os << "level " << sigma << " unattainable at radius " << radius << " for "
       << op.name() << " (max " << top << ")";
    throw UsageError(os.str());
  }
  if (sigma == top) return radius * diag;

  // Bracket: the diagonal sits above the target; a direction pushed toward
  // the cone boundary sits below it (f -> sup over the boundary <= 0 < sigma
  // for degree-1 families and -> -inf for the log family).
  Eigen::VectorXd low_dir;
  double low_val = 0.0;
  bool found = false;
  for (int attempt = 0; attempt < 64 && !found; ++attempt) {
    double margin_target = 1e-4;
    for (int push = 0; push < 24; ++push) {
      Eigen::VectorXd d = near_boundary_direction(cone, rng, scheme, margin_target);
      const double v = level_at(d);
      if (v < sigma) {
        low_dir = d;
        low_val = v;
        found = true;
        break;
      }
      margin_target *= 1e-2;
    }
  }
  if (!found)
    throw NumericalError("could not bracket the level value near the cone boundary");

  // Bisect the normalized blend; the segment stays inside the convex cone.
  Eigen::VectorXd hi_dir = diag;
  const double tol = 1e-9 * (1.0 + std::abs(sigma));
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd mid = 0.5 * (hi_dir + low_dir);
    const double norm = mid.norm();
    if (norm < 1e-12)
      throw NumericalError("degenerate direction bracket in level search");
    mid /= norm;
    const double v = level_at(mid);
    if (std::abs(v - sigma) <= tol) return radius * mid;
    if (v > sigma) {
      hi_dir = mid;
    } else {
      low_dir = mid;
      low_val = v;
    }
  }
  (void)low_val;
  throw NumericalError("level-direction bisection did not converge");
}

}  // namespace hesseq
