#include <benchmark/benchmark.h>

#include "delta/geometry.hpp"
#include "delta/kinematics.hpp"
#include "delta/workspace.hpp"

namespace {

const delta::DeltaGeometry kGeom = delta::default_geometry();
const delta::JointLimits kLimits;

void BM_InverseKinematics(benchmark::State& state) {
  delta::Vec3 target{0.012, -0.008, -0.045};
  for (auto _ : state) {
    auto res = delta::inverse_kinematics(kGeom, target, kLimits);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_InverseKinematics);

void BM_ForwardKinematics(benchmark::State& state) {
  auto ik = delta::inverse_kinematics(kGeom, {0.012, -0.008, -0.045}, kLimits);
  for (auto _ : state) {
    auto res = delta::forward_kinematics(kGeom, ik.angles);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_ForwardKinematics);

void BM_Roundtrip(benchmark::State& state) {
  delta::Vec3 target{0.012, -0.008, -0.045};
  for (auto _ : state) {
    auto ik = delta::inverse_kinematics(kGeom, target, kLimits);
    auto fk = delta::forward_kinematics(kGeom, ik.angles);
    benchmark::DoNotOptimize(fk);
  }
}
BENCHMARK(BM_Roundtrip);

void BM_Jacobian(benchmark::State& state) {
  auto ik = delta::inverse_kinematics(kGeom, {0.0, 0.0, -0.045}, kLimits);
  for (auto _ : state) {
    auto J = delta::jacobian(kGeom, ik.angles);
    benchmark::DoNotOptimize(J);
  }
}
BENCHMARK(BM_Jacobian);

// Coarse scan so a single iteration stays in the millisecond range; the
// full 1 mm production grid is ~125x more cells.
void BM_WorkspaceScan5mm(benchmark::State& state) {
  delta::GridSpec grid;
  grid.spacing = 0.005;
  for (auto _ : state) {
    auto map = delta::sample_workspace(kGeom, kLimits, grid);
    benchmark::DoNotOptimize(map);
  }
}
BENCHMARK(BM_WorkspaceScan5mm);

}  // namespace

BENCHMARK_MAIN();
