#pragma once

#include <array>
#include <vector>

#include "delta/experiment.hpp"

namespace delta {

enum class StatsError {
  kOk,
  kDegenerateTrace,  // lateral amplitude too small to normalize against
};

/// Per-trace summary: component amplitudes ((max-min)/2), means, and delta =
/// population standard deviation of the lateral force magnitude normalized by
/// the mean lateral amplitude.
struct TraceStats {
  std::array<double, 3> amplitude{};  // fx, fy, fz
  std::array<double, 3> mean{};
  double lateral_amplitude = 0.0;     // (amp_x + amp_y) / 2
  double delta = 0.0;
  StatsError error = StatsError::kOk;

  bool ok() const { return error == StatsError::kOk; }
};

/// Throws std::invalid_argument for traces shorter than 3 samples.
TraceStats trace_stats(const ForceTrace& trace);

enum class AnovaError {
  kOk,
  kZeroWithinVariance,  // identical values inside every group, F undefined
};

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  AnovaError error = AnovaError::kOk;

  bool ok() const { return error == AnovaError::kOk; }
};

/// Fixed-effects one-way ANOVA. Preconditions (throws std::invalid_argument):
/// at least two groups, each of size >= 2. Equal group means give F = 0,
/// p = 1; zero within-group variance with distinct means reports
/// kZeroWithinVariance.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// Regularized incomplete beta I_x(a, b) by the modified Lentz continued
/// fraction. a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double x, double a, double b);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of
/// freedom, evaluated as I_{d2/(d2 + d1 f)}(d2/2, d1/2).
double f_distribution_tail(double f, double d1, double d2);

}  // namespace delta
