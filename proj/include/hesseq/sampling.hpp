#pragma once

#include <cstdint>
#include <string>

#include "hesseq/cone.hpp"
#include "hesseq/rng.hpp"

namespace hesseq {

enum class DirectionScheme { UniformOnCone, DiagonalBiased };

// Reproducible sampling plan: every sampled quantity is a pure function of
// (seed, stream, sample index).
struct SamplingPlan {
  std::uint64_t seed = 1;
  int count = 1000;
  double r_min = 0.1;     // radial range, log-spaced
  double r_max = 1000.0;
  DirectionScheme scheme = DirectionScheme::UniformOnCone;
};

std::string to_string(DirectionScheme s);
DirectionScheme direction_scheme_from_string(const std::string& s);

// Unit vector strictly inside the cone (rejection from the sphere; the
// diagonal-biased scheme blends toward the diagonal before normalizing).
Eigen::VectorXd sample_cone_direction(const ConeSpec& cone, Rng& rng,
                                      DirectionScheme scheme);

// Unit direction whose cone margin is within (0, margin_target], found by
// bisecting between an interior direction and an outside one. Worst cases of
// the sampled conditions live near the cone boundary, so audits force a share
// of these.
Eigen::VectorXd near_boundary_direction(const ConeSpec& cone, Rng& rng,
                                        DirectionScheme scheme,
                                        double margin_target);

// Interior point: sampled direction at a log-uniform radius in
// [plan.r_min, plan.r_max]. min_rel_margin rejects directions whose unit-scale
// cone margin is below it (keeps finite-difference stencils inside the cone).
EigenTuple sample_cone_point(const ConeSpec& cone, Rng& rng,
                             const SamplingPlan& plan,
                             double min_rel_margin = 0.0);

// Point on the level surface {f = sigma} with |lambda| = radius, found by
// bisecting the direction between the diagonal (where f is maximal on the
// sphere) and a near-boundary direction, then scaling by the radius.
// Throws UsageError if (sigma, radius) is unattainable for op.
EigenTuple level_point_at_radius(const OperatorSpec& op, double sigma,
                                 double radius, Rng& rng,
                                 DirectionScheme scheme);

// Largest level value attainable at the given radius (value of f at the
// diagonal point of that radius).
double max_level_at_radius(const OperatorSpec& op, double radius);

}  // namespace hesseq
