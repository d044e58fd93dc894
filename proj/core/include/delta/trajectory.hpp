#pragma once

#include <vector>

#include "delta/vec3.hpp"

namespace delta {

struct TrajectorySample {
  double t;
  Vec3 position;
};

/// Horizontal circle of the given radius centred on the axis at height z,
/// swept at angular_rate for `duration` seconds, sampled at sample_rate.
/// Sample k is at t = k / sample_rate, k in [0, round(duration*sample_rate));
/// the end point is excluded so whole periods tile without a duplicate.
/// Throws std::invalid_argument on radius < 0 or non-positive rates/duration.
std::vector<TrajectorySample> circular_trajectory(double radius, double z,
                                                  double angular_rate,
                                                  double duration,
                                                  double sample_rate);

/// n unit vectors in the lateral (z = 0) plane at azimuths 2*pi*k/n.
/// Throws std::invalid_argument for n < 2.
std::vector<Vec3> direction_set(int n);

}  // namespace delta
