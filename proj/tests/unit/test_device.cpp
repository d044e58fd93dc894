#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "delta/device.hpp"
#include "delta/format.hpp"
#include "../support/oracles.hpp"

using namespace delta;

namespace {

const DeltaGeometry kGeom = default_geometry();
const JointLimits kLimits;

JointAngles central_pose() {
  IkResult ik = inverse_kinematics(kGeom, {0.0, 0.0, -0.011}, kLimits);
  REQUIRE(ik.ok());
  return ik.angles;
}

DeviceModel default_model() {
  return make_device_model(kGeom, kLimits, ServoConfig{}, 72.0, GridSpec{});
}

}  // namespace

TEST_CASE("servo config validation") {
  ServoConfig good;
  good.torque_limit = 0.03;
  CHECK_NOTHROW(validate_servo_config(good));

  ServoConfig unset;  // torque_limit defaults to 0
  CHECK_THROWS_AS(validate_servo_config(unset), std::invalid_argument);
  CHECK_NOTHROW(validate_servo_config(unset, true));

  ServoConfig bad_rate = good;
  bad_rate.max_rate = 0.0;
  CHECK_THROWS_AS(validate_servo_config(bad_rate), std::invalid_argument);

  ServoConfig coarse = good;
  coarse.quantization = 0.02;  // above the 0.01 rad ceiling
  CHECK_THROWS_AS(validate_servo_config(coarse), std::invalid_argument);

  ServoConfig inverted = good;
  inverted.limits = {0.5, -0.5};
  CHECK_THROWS_AS(validate_servo_config(inverted), std::invalid_argument);
}

TEST_CASE("torques equal the transposed jacobian applied to the force") {
  JointAngles pose = central_pose();
  auto j = jacobian(kGeom, pose);
  REQUIRE(j.has_value());
  Vec3 f{0.3, -0.2, 1.1};
  auto tau = joint_torques_for_force(kGeom, pose, f);
  REQUIRE(tau.has_value());
  Vec3 expect = j->transpose_apply(f);
  CHECK((*tau)[0] == doctest::Approx(expect.x).epsilon(1e-12));
  CHECK((*tau)[1] == doctest::Approx(expect.y).epsilon(1e-12));
  CHECK((*tau)[2] == doctest::Approx(expect.z).epsilon(1e-12));

  // Virtual work: tau . dtheta == f . (J dtheta) for any joint velocity.
  Vec3 dtheta{0.011, -0.07, 0.131};
  double lhs = (*tau)[0] * dtheta.x + (*tau)[1] * dtheta.y + (*tau)[2] * dtheta.z;
  double rhs = f.dot(j->apply(dtheta));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("force capability matches the bisection oracle") {
  JointAngles pose = central_pose();
  const double tau_max = 0.0337;
  for (const Vec3& dir : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0.4, -0.3, 0.86},
                          Vec3{-1, 2, -0.5}}) {
    Capability cap = force_capability(kGeom, pose, dir, tau_max);
    REQUIRE(cap.ok());
    double ref = oracle::bisect_capability(kGeom, pose, dir, tau_max);
    CHECK(cap.newtons == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("force capability scales linearly with the torque limit") {
  JointAngles pose = central_pose();
  Vec3 dir{0.2, 0.5, -0.8};
  Capability one = force_capability(kGeom, pose, dir, 0.02);
  Capability two = force_capability(kGeom, pose, dir, 0.04);
  REQUIRE(one.ok());
  REQUIRE(two.ok());
  CHECK(two.newtons == doctest::Approx(2.0 * one.newtons).epsilon(1e-12));
}

TEST_CASE("force capability is independent of direction magnitude") {
  JointAngles pose = central_pose();
  Capability unit = force_capability(kGeom, pose, {0, 0, 1}, 0.03);
  Capability scaled = force_capability(kGeom, pose, {0, 0, 7.5}, 0.03);
  REQUIRE(unit.ok());
  REQUIRE(scaled.ok());
  CHECK(unit.newtons == doctest::Approx(scaled.newtons).epsilon(1e-12));
}

TEST_CASE("calibration yields the requested vertical capability") {
  JointAngles pose = central_pose();
  double tau = calibrate_torque_limit(kGeom, pose, 1.8);
  Capability cap = force_capability(kGeom, pose, {0.0, 0.0, 1.0}, tau);
  REQUIRE(cap.ok());
  CHECK(cap.newtons == doctest::Approx(1.8).epsilon(1e-12));
  // Frozen value for the default geometry at the central pose.
  CHECK(tau == doctest::Approx(0.033701152).epsilon(1e-6));
}

TEST_CASE("lateral capability is below vertical at the central pose") {
  JointAngles pose = central_pose();
  double tau = calibrate_torque_limit(kGeom, pose, 1.8);
  double worst_lateral = 1e9;
  for (int k = 0; k < 24; ++k) {
    double a = 2.0 * kPi * k / 24.0;
    Capability cap =
        force_capability(kGeom, pose, {std::cos(a), std::sin(a), 0.0}, tau);
    REQUIRE(cap.ok());
    worst_lateral = std::min(worst_lateral, cap.newtons);
  }
  CHECK(worst_lateral < 1.8);
  // Frozen worst-azimuth value for the default geometry.
  CHECK(worst_lateral == doctest::Approx(1.131661092).epsilon(1e-6));
}

TEST_CASE("clamp preserves direction and never exceeds the envelope") {
  JointAngles pose = central_pose();
  const double tau_max = 0.0337;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> comp(-3.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    Vec3 f{comp(rng), comp(rng), comp(rng)};
    auto clamped = clamp_force(kGeom, pose, f, tau_max);
    REQUIRE(clamped.has_value());
    // Feasible.
    auto tau = joint_torques_for_force(kGeom, pose, *clamped);
    REQUIRE(tau.has_value());
    for (double t : *tau) CHECK(std::fabs(t) <= tau_max * (1.0 + 1e-12));
    // Direction preserved, magnitude never increased.
    CHECK(clamped->norm() <= f.norm() * (1.0 + 1e-12));
    if (f.norm() > 1e-9 && clamped->norm() > 1e-9) {
      Vec3 a = f.normalized();
      Vec3 b = clamped->normalized();
      CHECK((a - b).norm() < 1e-9);
    }
    // Already-feasible forces pass through untouched.
    auto tau_raw = joint_torques_for_force(kGeom, pose, f);
    REQUIRE(tau_raw.has_value());
    double worst = std::max({std::fabs((*tau_raw)[0]), std::fabs((*tau_raw)[1]),
                             std::fabs((*tau_raw)[2])});
    if (worst <= tau_max) {
      CHECK((*clamped - f).norm() == 0.0);
    } else {
      // Saturated: some joint sits exactly at the limit.
      double worst_c = std::max({std::fabs((*tau)[0]), std::fabs((*tau)[1]),
                                 std::fabs((*tau)[2])});
      CHECK(worst_c == doctest::Approx(tau_max).epsilon(1e-9));
    }
  }
}

TEST_CASE("step_command converges to a quantized target under rate limits") {
  ServoConfig servo;
  servo.torque_limit = 0.03;
  DeviceState state;
  state.current[0] = -0.4;
  state.current[1] = 0.1;
  state.current[2] = 0.0;
  JointAngles target;
  target[0] = 0.3;
  target[1] = -0.2;
  target[2] = 0.5001;
  const double dt = 1.0 / 250.0;
  for (int i = 0; i < 5000; ++i) {
    DeviceState next = step_command(state, target, dt, servo);
    // Rate limit respected at every step.
    for (int jnt = 0; jnt < 3; ++jnt) {
      CHECK(std::fabs(next.current[jnt] - state.current[jnt]) <=
            servo.max_rate * dt * (1.0 + 1e-12));
    }
    CHECK(next.timestamp == doctest::Approx(state.timestamp + dt).epsilon(1e-12));
    state = next;
  }
  // Settled on the quantized target.
  for (int jnt = 0; jnt < 3; ++jnt) {
    double quantized =
        std::round(target[jnt] / servo.quantization) * servo.quantization;
    CHECK(state.current[jnt] == doctest::Approx(quantized).epsilon(1e-12));
    CHECK(std::fabs(state.current[jnt] - target[jnt]) <=
          servo.quantization / 2.0 + 1e-15);
  }
}

TEST_CASE("step_command clamps targets to the joint limits") {
  ServoConfig servo;
  servo.torque_limit = 0.03;
  servo.limits = {-0.5, 0.5};
  DeviceState state;
  JointAngles target;
  target[0] = 2.0;  // far beyond the limit
  target[1] = -2.0;
  target[2] = 0.0;
  for (int i = 0; i < 2000; ++i) {
    state = step_command(state, target, 1.0 / 250.0, servo);
  }
  CHECK(state.current[0] <= 0.5 + 1e-12);
  CHECK(state.current[1] >= -0.5 - 1e-12);
  CHECK(state.current[0] == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(step_command(state, target, 0.0, servo), std::invalid_argument);
}

TEST_CASE("encode golden lines and round trip") {
  ServoConfig servo;
  servo.torque_limit = 0.03;
  JointAngles a;
  a[0] = 0.1;
  a[1] = -0.1;
  a[2] = 0.05;
  auto line = encode_command(a, servo);
  REQUIRE(line.has_value());
  CHECK(*line == "A 1000 -1000 500\n");

  auto back = decode_command(*line);
  REQUIRE(back.has_value());
  for (int i = 0; i < 3; ++i) {
    CHECK((*back)[i] == doctest::Approx(a[i]).epsilon(1e-9));
  }

  // Rounding is to the nearest count.
  JointAngles b;
  b[0] = 0.00004;   // rounds to 0
  b[1] = 0.00006;   // rounds to 1
  b[2] = -0.00006;  // rounds to -1
  auto line2 = encode_command(b, servo);
  REQUIRE(line2.has_value());
  CHECK(*line2 == "A 0 1 -1\n");
}

TEST_CASE("encode rejects angles outside the servo limits") {
  ServoConfig servo;
  servo.torque_limit = 0.03;
  servo.limits = {-0.5, 0.5};
  JointAngles a;
  a[0] = 0.6;
  CHECK(!encode_command(a, servo).has_value());
}

TEST_CASE("decode rejects malformed lines") {
  CHECK(!decode_command("").has_value());
  CHECK(!decode_command("B 1 2 3\n").has_value());
  CHECK(!decode_command("A 1 2\n").has_value());
  CHECK(!decode_command("A 1 2 3 4\n").has_value());
  CHECK(!decode_command("A one 2 3\n").has_value());
  CHECK(decode_command("A 1 2 3\n").has_value());
  CHECK(decode_command("A 1 2 3").has_value());  // newline optional
}

TEST_CASE("model assembly finds the central pose and calibrates") {
  DeviceModel model = default_model();
  CHECK(model.central_position.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(model.central_position.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(model.central_position.z == doctest::Approx(-0.011).epsilon(1e-12));
  CHECK(model.servo.torque_limit == doctest::Approx(0.033701152).epsilon(1e-6));
  CHECK(model.stiffness == 72.0);

  // The joint pose matches ik at the central position.
  JointAngles expect = central_pose();
  for (int i = 0; i < 3; ++i) {
    CHECK(model.central_pose[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }

  // clamp() delegates to the envelope at the central pose.
  Vec3 big{0.0, 0.0, 50.0};
  Vec3 clamped = model.clamp(big);
  CHECK(clamped.z == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(clamped.x == doctest::Approx(0.0).epsilon(1e-12));

  Vec3 small{0.0, 0.0, 0.5};
  CHECK((model.clamp(small) - small).norm() == 0.0);
}

TEST_CASE("model assembly respects an explicit torque limit") {
  ServoConfig servo;
  servo.torque_limit = 0.05;
  DeviceModel model = make_device_model(kGeom, kLimits, servo, 72.0, GridSpec{});
  CHECK(model.servo.torque_limit == 0.05);
}

TEST_CASE("model assembly fails on an empty workspace") {
  DeltaGeometry thin(0.080, 0.035, 0.0355, 0.010,
                     {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0});
  CHECK_THROWS_AS(
      make_device_model(thin, kLimits, ServoConfig{}, 72.0, GridSpec{}),
      std::runtime_error);
}

TEST_CASE("capability reports unbounded directions as an error") {
  // A direction orthogonal to all three torque rows cannot load any joint;
  // construct one via the Jacobian's null force direction when it exists, or
  // simply verify the degenerate zero-direction contract on a regular pose.
  JointAngles pose = central_pose();
  Capability cap = force_capability(kGeom, pose, {0.0, 0.0, 0.0}, 0.03);
  CHECK(cap.error == CapabilityError::kUnbounded);
}
