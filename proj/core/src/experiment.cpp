#include "delta/experiment.hpp"

#include <cmath>

#include "delta/random.hpp"

namespace delta {

ExperimentResult run_force_experiment(const DeviceModel& model,
                                      const std::vector<TrajectorySample>& trajectory,
                                      const Vec3& anchor,
                                      const ExperimentOptions& options,
                                      double radius, double height,
                                      double angular_rate, double sample_rate) {
  ExperimentResult out;
  out.trace.radius = radius;
  out.trace.height = height;
  out.trace.angular_rate = angular_rate;
  out.trace.sample_rate = sample_rate;
  out.trace.samples.reserve(trajectory.size());

  NormalSampler noise(options.noise_seed);
  DeviceState state;
  bool have_state = false;

  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const TrajectorySample& ts = trajectory[k];
    IkResult ik = inverse_kinematics(model.geometry, ts.position, model.limits);
    if (!ik.ok()) {
      out.error = ExperimentError::kUnreachable;
      out.failed_sample = static_cast<int>(k);
      out.failed_chain = ik.chain;
      return out;
    }

    JointAngles achieved = ik.angles;
    if (!options.ideal_servo) {
      if (!have_state) {
        // Servo starts parked on the first target; no artificial transient.
        state.current = ik.angles;
        state.commanded = ik.angles;
        state.timestamp = ts.t;
        have_state = true;
      } else {
        double dt = ts.t - state.timestamp;
        state = step_command(state, ik.angles, dt, model.servo);
      }
      achieved = state.current;
    }

    FkResult fk = forward_kinematics(model.geometry, achieved);
    if (!fk.ok()) {
      out.error = ExperimentError::kFkFailed;
      out.failed_sample = static_cast<int>(k);
      return out;
    }

    ForceVector f = (fk.position - anchor) * model.stiffness;
    f = model.clamp(f);
    if (options.noise_level > 0.0) {
      f = f * (1.0 + options.noise_level * noise.next());
    }

    out.trace.samples.push_back({ts.t, ts.position, fk.position, f});
  }
  return out;
}

double quantization_force_bound(const DeviceModel& model,
                                const std::vector<TrajectorySample>& trajectory) {
  // Worst-case position error of a converged quantized servo is q/2 per
  // joint; through the Jacobian that bounds the spring-force deviation.
  // Frobenius norm over-estimates the spectral norm, which keeps the bound
  // conservative.
  double worst_norm = 0.0;
  for (const TrajectorySample& ts : trajectory) {
    IkResult ik = inverse_kinematics(model.geometry, ts.position, model.limits);
    if (!ik.ok()) continue;
    auto j = jacobian(model.geometry, ik.angles);
    if (!j) continue;
    worst_norm = std::max(worst_norm, j->frobenius_norm());
  }
  double dq = std::sqrt(3.0) * 0.5 * model.servo.quantization;
  return model.stiffness * worst_norm * dq;
}

}  // namespace delta
