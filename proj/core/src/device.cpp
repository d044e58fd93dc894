#include "delta/device.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace delta {

void validate_servo_config(const ServoConfig& servo, bool allow_unset_torque) {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(servo.torque_limit) || bad(servo.max_rate) || bad(servo.quantization) ||
      bad(servo.limits.min) || bad(servo.limits.max)) {
    throw std::invalid_argument("servo: all parameters must be finite");
  }
  if (servo.torque_limit < 0.0 || (servo.torque_limit == 0.0 && !allow_unset_torque)) {
    throw std::invalid_argument("servo: torque_limit must be positive");
  }
  if (servo.max_rate <= 0.0) {
    throw std::invalid_argument("servo: max_rate must be positive");
  }
  if (servo.quantization <= 0.0 || servo.quantization > 0.01) {
    throw std::invalid_argument("servo: quantization must be in (0, 0.01] rad");
  }
  if (!(servo.limits.min < servo.limits.max)) {
    throw std::invalid_argument("servo: joint limit range is empty");
  }
}

DeviceState step_command(const DeviceState& state, const JointAngles& target,
                         double dt, const ServoConfig& servo) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step_command: dt must be positive");
  }
  DeviceState next = state;
  next.commanded = target;
  next.timestamp = state.timestamp + dt;
  const double max_step = servo.max_rate * dt;
  for (int i = 0; i < 3; ++i) {
    double quantized = std::round(target[i] / servo.quantization) * servo.quantization;
    quantized = std::clamp(quantized, servo.limits.min, servo.limits.max);
    double delta_step = std::clamp(quantized - state.current[i], -max_step, max_step);
    next.current[i] = state.current[i] + delta_step;
  }
  return next;
}

std::optional<std::string> encode_command(const JointAngles& angles,
                                          const ServoConfig& servo) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(angles[i]) || !servo.limits.contains(angles[i])) {
      return std::nullopt;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "A %lld %lld %lld\n",
                static_cast<long long>(std::llround(angles[0] * 1e4)),
                static_cast<long long>(std::llround(angles[1] * 1e4)),
                static_cast<long long>(std::llround(angles[2] * 1e4)));
  return std::string(buf);
}

std::optional<JointAngles> decode_command(const std::string& line) {
  long long c0, c1, c2;
  char tail = 0;
  int n = std::sscanf(line.c_str(), "A %lld %lld %lld%c", &c0, &c1, &c2, &tail);
  if (n == 4 && tail != '\n') return std::nullopt;
  if (n < 3) return std::nullopt;
  JointAngles a;
  a[0] = c0 * 1e-4;
  a[1] = c1 * 1e-4;
  a[2] = c2 * 1e-4;
  return a;
}

std::optional<std::array<double, 3>> joint_torques_for_force(
    const DeltaGeometry& g, const JointAngles& angles, const ForceVector& f) {
  auto j = jacobian(g, angles);
  if (!j) return std::nullopt;
  Vec3 tau = j->transpose_apply(f);
  return std::array<double, 3>{tau.x, tau.y, tau.z};
}

Capability force_capability(const DeltaGeometry& g, const JointAngles& angles,
                            const Vec3& direction, double torque_limit) {
  Capability out;
  double len = direction.norm();
  if (!(len > 0.0) || !direction.finite()) {
    out.error = CapabilityError::kUnbounded;
    return out;
  }
  auto tau = joint_torques_for_force(g, angles, direction / len);
  if (!tau) {
    out.error = CapabilityError::kSingular;
    return out;
  }
  double worst = std::max({std::fabs((*tau)[0]), std::fabs((*tau)[1]),
                           std::fabs((*tau)[2])});
  if (worst < 1e-15) {
    // A force that costs no torque anywhere is outside the model.
    out.error = CapabilityError::kUnbounded;
    return out;
  }
  out.newtons = torque_limit / worst;
  return out;
}

std::optional<ForceVector> clamp_force(const DeltaGeometry& g,
                                       const JointAngles& angles,
                                       const ForceVector& f,
                                       double torque_limit) {
  auto tau = joint_torques_for_force(g, angles, f);
  if (!tau) return std::nullopt;
  double worst = std::max({std::fabs((*tau)[0]), std::fabs((*tau)[1]),
                           std::fabs((*tau)[2])});
  if (worst <= torque_limit) return f;
  return f * (torque_limit / worst);
}

double calibrate_torque_limit(const DeltaGeometry& g, const JointAngles& pose,
                              double target_newtons) {
  auto tau = joint_torques_for_force(g, pose, {0.0, 0.0, 1.0});
  if (!tau) {
    throw std::runtime_error("calibration pose is singular");
  }
  double worst = std::max({std::fabs((*tau)[0]), std::fabs((*tau)[1]),
                           std::fabs((*tau)[2])});
  if (worst < 1e-15) {
    throw std::runtime_error("calibration pose gives no vertical torque coupling");
  }
  // capability = torque_limit / worst, so this makes the vertical capability
  // at `pose` exactly target_newtons.
  return target_newtons * worst;
}

ForceVector DeviceModel::clamp(const ForceVector& f) const {
  auto clamped = clamp_force(geometry, central_pose, f, servo.torque_limit);
  // The central pose is regular by construction; fall back to zero rather
  // than deliver an unclamped force if it somehow is not.
  return clamped ? *clamped : ForceVector{};
}

DeviceModel make_device_model(const DeltaGeometry& g, const JointLimits& limits,
                              ServoConfig servo, double stiffness,
                              const GridSpec& grid, double calibration_force) {
  validate_servo_config(servo, /*allow_unset_torque=*/true);
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw std::invalid_argument("stiffness must be positive");
  }

  WorkspaceMap map = sample_workspace(g, limits, grid);
  if (map.empty()) {
    throw std::runtime_error("workspace is empty over the sampling grid");
  }

  Vec3 centre{0.0, 0.0, map.best_z};
  IkResult ik = inverse_kinematics(g, centre, limits);
  if (!ik.ok()) {
    throw std::runtime_error("central operating pose is not reachable");
  }

  DeviceModel model{g, limits, servo, stiffness, ik.angles, centre};
  if (servo.torque_limit == 0.0) {
    model.servo.torque_limit =
        calibrate_torque_limit(g, ik.angles, calibration_force);
  }
  validate_servo_config(model.servo);
  return model;
}

}  // namespace delta
