#pragma once

#include <array>
#include <numbers>

#include "delta/vec3.hpp"

namespace delta {

inline constexpr double kPi = std::numbers::pi;

/// Link and mounting dimensions of a three-chain rotational delta mechanism.
/// All lengths in metres, angles in radians. The three shoulder joints sit on
/// a circle of base_radius in the z = 0 plane at the given azimuths; the wrist
/// joints attach to the moving ring at effector_radius. Construction validates
/// the invariants and throws std::invalid_argument on violation.
struct DeltaGeometry {
  double base_radius;
  double upper_arm;
  double forearm;
  double effector_radius;
  std::array<double, 3> chain_azimuths;

  DeltaGeometry(double base_radius_, double upper_arm_, double forearm_,
                double effector_radius_,
                const std::array<double, 3>& chain_azimuths_);

  /// Radial shoulder-to-wrist offset in the chain frame.
  double radial_offset() const { return base_radius - effector_radius; }

  /// Shoulder position of one chain in the base frame.
  Vec3 shoulder(int chain) const {
    return rotated_z({radial_offset(), 0.0, 0.0}, chain_azimuths[chain]);
  }
};

/// 80/35/60/10 mm geometry with evenly spaced chains.
DeltaGeometry default_geometry();

/// Shoulder joint angle range, radians. min < max required.
struct JointLimits {
  double min = -kPi / 2.0;
  double max = kPi / 2.0;

  bool contains(double theta) const { return theta >= min && theta <= max; }
  double mid() const { return 0.5 * (min + max); }
};

struct JointAngles {
  std::array<double, 3> theta{0.0, 0.0, 0.0};

  double& operator[](int i) { return theta[i]; }
  double operator[](int i) const { return theta[i]; }
  bool finite() const;
};

}  // namespace delta
