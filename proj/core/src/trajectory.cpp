#include "delta/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace delta {

std::vector<TrajectorySample> circular_trajectory(double radius, double z,
                                                  double angular_rate,
                                                  double duration,
                                                  double sample_rate) {
  if (!(radius >= 0.0) || !(angular_rate > 0.0) || !(duration > 0.0) ||
      !(sample_rate > 0.0)) {
    throw std::invalid_argument(
        "circular_trajectory: radius >= 0 and positive rate/duration required");
  }
  auto count = static_cast<std::size_t>(std::llround(duration * sample_rate));
  if (count == 0) {
    throw std::invalid_argument("circular_trajectory: duration too short for sample rate");
  }
  std::vector<TrajectorySample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double t = static_cast<double>(k) / sample_rate;
    double phase = angular_rate * t;
    out.push_back({t, {radius * std::cos(phase), radius * std::sin(phase), z}});
  }
  return out;
}

std::vector<Vec3> direction_set(int n) {
  if (n < 2) throw std::invalid_argument("direction_set: need at least 2 directions");
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * std::numbers::pi * k / n;
    out.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return out;
}

}  // namespace delta
