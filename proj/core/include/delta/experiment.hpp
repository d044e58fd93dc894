#pragma once

#include <cstdint>
#include <vector>

#include "delta/device.hpp"
#include "delta/trajectory.hpp"

namespace delta {

/// One rendered sample of a force trace.
struct ForceSample {
  double t;
  Vec3 commanded;   // commanded finger position
  Vec3 achieved;    // position the servos actually reached
  ForceVector force;
};

struct ForceTrace {
  std::vector<ForceSample> samples;
  double radius = 0.0;
  double height = 0.0;
  double angular_rate = 0.0;
  double sample_rate = 0.0;
};

enum class ExperimentError {
  kOk,
  kUnreachable,  // trajectory point outside the workspace
  kFkFailed,     // achieved angles did not close (should not happen in practice)
};

struct ExperimentResult {
  ForceTrace trace;
  ExperimentError error = ExperimentError::kOk;
  int failed_sample = -1;
  int failed_chain = -1;

  bool ok() const { return error == ExperimentError::kOk; }
};

struct ExperimentOptions {
  bool ideal_servo = false;     // skip rate limiting / quantization
  double noise_level = 0.0;     // multiplicative sigma on the delivered force
  std::uint64_t noise_seed = 0;
};

/// Runs the spring-force pipeline over a trajectory: IK -> servo tracking ->
/// FK -> F = stiffness * (achieved - anchor) -> saturation clamp at the
/// central pose -> optional seeded multiplicative noise. The anchor plays the
/// role of the virtual surface point the spring pulls toward.
ExperimentResult run_force_experiment(const DeviceModel& model,
                                      const std::vector<TrajectorySample>& trajectory,
                                      const Vec3& anchor,
                                      const ExperimentOptions& options,
                                      double radius, double height,
                                      double angular_rate, double sample_rate);

/// Worst-case force deviation a quantized (but rate-keeping) servo can cause
/// relative to the ideal trace: stiffness * max_t ||J(theta(t))|| * ||dq||,
/// with per-joint quantization error q/2. Conservative (Frobenius norm).
double quantization_force_bound(const DeviceModel& model,
                                const std::vector<TrajectorySample>& trajectory);

}  // namespace delta
