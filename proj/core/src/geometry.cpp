#include "delta/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace delta {

namespace {

double wrap_two_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

}  // namespace

DeltaGeometry::DeltaGeometry(double base_radius_, double upper_arm_,
                             double forearm_, double effector_radius_,
                             const std::array<double, 3>& chain_azimuths_)
    : base_radius(base_radius_),
      upper_arm(upper_arm_),
      forearm(forearm_),
      effector_radius(effector_radius_),
      chain_azimuths(chain_azimuths_) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(base_radius) || !positive(upper_arm) || !positive(forearm) ||
      !positive(effector_radius)) {
    throw std::invalid_argument("geometry: all lengths must be finite and positive");
  }
  for (double a : chain_azimuths) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("geometry: azimuths must be finite");
    }
  }
  // The arm pair must be able to span the shoulder-to-wrist radial gap,
  // otherwise no point is reachable at all.
  if (upper_arm + forearm <= base_radius - effector_radius) {
    throw std::invalid_argument(
        "geometry: upper_arm + forearm must exceed base_radius - effector_radius");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double d = std::fabs(wrap_two_pi(chain_azimuths[i]) - wrap_two_pi(chain_azimuths[j]));
      d = std::min(d, 2.0 * kPi - d);
      if (d < 1e-9) {
        throw std::invalid_argument("geometry: chain azimuths " + std::to_string(i) +
                                    " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

DeltaGeometry default_geometry() {
  return DeltaGeometry(0.080, 0.035, 0.060, 0.010,
                       {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0});
}

bool JointAngles::finite() const {
  return std::isfinite(theta[0]) && std::isfinite(theta[1]) && std::isfinite(theta[2]);
}

}  // namespace delta
