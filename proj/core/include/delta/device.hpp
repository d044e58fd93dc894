#pragma once

#include <array>
#include <optional>
#include <string>

#include "delta/geometry.hpp"
#include "delta/kinematics.hpp"
#include "delta/workspace.hpp"

namespace delta {

/// Servo actuator limits. All fields must be finite and positive
/// (quantization at most 0.01 rad); construction-time validation via
/// validate_servo_config.
struct ServoConfig {
  double torque_limit = 0.0;       // N*m per joint; 0 = calibrate at model build
  double max_rate = 8.0;           // rad/s
  double quantization = 1.57e-3;   // rad per command step
  JointLimits limits;
};

/// Throws std::invalid_argument on violation. allow_unset_torque permits
/// torque_limit == 0 for configs that defer to calibration.
void validate_servo_config(const ServoConfig& servo, bool allow_unset_torque = false);

struct DeviceState {
  JointAngles current;    // achieved shaft angles
  JointAngles commanded;  // last raw command
  double timestamp = 0.0;
};

/// Advances the servo toward target by dt: quantizes the target to the
/// command grid, rate-limits each joint, clamps to the joint limits.
DeviceState step_command(const DeviceState& state, const JointAngles& target,
                         double dt, const ServoConfig& servo);

/// Wire line "A <c0> <c1> <c2>\n", c_i = round(theta_i * 1e4).
/// Empty when any angle falls outside the servo limits.
std::optional<std::string> encode_command(const JointAngles& angles,
                                          const ServoConfig& servo);

/// Parses a wire line back to angles. Empty on malformed input.
std::optional<JointAngles> decode_command(const std::string& line);

/// Joint torques that realize tip force f at the given pose: tau = J^T f.
/// Empty at singular poses (Jacobian unavailable).
std::optional<std::array<double, 3>> joint_torques_for_force(
    const DeltaGeometry& g, const JointAngles& angles, const ForceVector& f);

enum class CapabilityError {
  kOk,
  kSingular,   // no Jacobian at the pose
  kUnbounded,  // direction maps to (numerically) zero torque on every joint
};

struct Capability {
  double newtons = 0.0;
  CapabilityError error = CapabilityError::kOk;

  bool ok() const { return error == CapabilityError::kOk; }
};

/// Largest force magnitude deliverable along `direction` (normalized
/// internally) before some joint torque hits torque_limit.
Capability force_capability(const DeltaGeometry& g, const JointAngles& angles,
                            const Vec3& direction, double torque_limit);

/// Scales f down (direction preserved) until every joint torque fits the
/// limit; returns f unchanged when already feasible. Empty at singular poses.
std::optional<ForceVector> clamp_force(const DeltaGeometry& g,
                                       const JointAngles& angles,
                                       const ForceVector& f,
                                       double torque_limit);

/// Torque limit giving exactly `target_newtons` of vertical force capability
/// at the given pose.
double calibrate_torque_limit(const DeltaGeometry& g, const JointAngles& pose,
                              double target_newtons);

/// Assembled simulation model: geometry, servo, stiffness and the central
/// operating pose (on-axis point at the best-coverage workspace height).
/// Saturation clamping is evaluated at this fixed pose.
struct DeviceModel {
  DeltaGeometry geometry;
  JointLimits limits;
  ServoConfig servo;
  double stiffness;         // N/m
  JointAngles central_pose;
  Vec3 central_position;

  ForceVector clamp(const ForceVector& f) const;
};

/// Finds the central operating pose from a workspace scan and, when
/// servo.torque_limit == 0, calibrates it for `calibration_force` newtons of
/// vertical capability at that pose. Throws std::runtime_error when the
/// workspace is empty over the grid.
DeviceModel make_device_model(const DeltaGeometry& g, const JointLimits& limits,
                              ServoConfig servo, double stiffness,
                              const GridSpec& grid,
                              double calibration_force = 1.8);

}  // namespace delta
