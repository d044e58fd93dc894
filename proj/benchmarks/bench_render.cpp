#include <benchmark/benchmark.h>

#include "delta/geometry.hpp"
#include "delta/mesh.hpp"
#include "delta/rendering.hpp"

namespace {

constexpr double kApexHeight = 0.10;
constexpr double kConeAngle = 15.0 * delta::kPi / 180.0;

const delta::SurfaceMesh& slab() {
  static auto mesh = delta::make_rectangle(-0.2, 0.2, -0.2, 0.2, -0.025);
  return mesh;
}

const delta::SurfaceMesh& ball(int level) {
  static auto level3 = delta::make_icosphere(0.05, 3);
  static auto level4 = delta::make_icosphere(0.05, 4);
  return level == 3 ? level3 : level4;
}

void BM_RayCastSlab(benchmark::State& state) {
  delta::Vec3 origin{0.01, 0.02, 0.1};
  delta::Vec3 dir{0.0, 0.0, -1.0};
  for (auto _ : state) {
    auto hit = delta::ray_cast(slab(), origin, dir);
    benchmark::DoNotOptimize(hit);
  }
}
BENCHMARK(BM_RayCastSlab);

void BM_RayCastIcosphere(benchmark::State& state) {
  const auto& mesh = ball(state.range(0));
  delta::Vec3 origin{0.0, 0.0, 0.2};
  delta::Vec3 dir{0.0, 0.0, -1.0};
  for (auto _ : state) {
    auto hit = delta::ray_cast(mesh, origin, dir);
    benchmark::DoNotOptimize(hit);
  }
}
BENCHMARK(BM_RayCastIcosphere)->Arg(3)->Arg(4);

void BM_ClosestPointIcosphere(benchmark::State& state) {
  const auto& mesh = ball(state.range(0));
  delta::Vec3 query{0.02, 0.01, 0.06};
  for (auto _ : state) {
    auto cp = delta::closest_point(mesh, query);
    benchmark::DoNotOptimize(cp);
  }
}
BENCHMARK(BM_ClosestPointIcosphere)->Arg(3)->Arg(4);

void BM_ReferencePlaneSlab(benchmark::State& state) {
  delta::Vec3 contact{0.0, 0.0, -0.025};
  for (auto _ : state) {
    auto plane = delta::reference_plane(slab(), contact, kApexHeight, kConeAngle);
    benchmark::DoNotOptimize(plane);
  }
}
BENCHMARK(BM_ReferencePlaneSlab);

void BM_RenderForceIcosphere(benchmark::State& state) {
  const auto& mesh = ball(state.range(0));
  // Below the chordal plane of the three-ray patch, so the force is nonzero.
  delta::Vec3 finger{0.0, 0.0, 0.038};
  for (auto _ : state) {
    auto f = delta::render_force(mesh, finger, 72.0, kApexHeight, kConeAngle);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_RenderForceIcosphere)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
