#include "delta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace delta {

TraceStats trace_stats(const ForceTrace& trace) {
  const auto& samples = trace.samples;
  if (samples.size() < 3) {
    throw std::invalid_argument("trace_stats: need at least 3 samples");
  }

  TraceStats out;
  double lo[3], hi[3], sum[3];
  for (int c = 0; c < 3; ++c) {
    lo[c] = std::numeric_limits<double>::infinity();
    hi[c] = -std::numeric_limits<double>::infinity();
    sum[c] = 0.0;
  }
  for (const ForceSample& s : samples) {
    const double comps[3] = {s.force.x, s.force.y, s.force.z};
    for (int c = 0; c < 3; ++c) {
      lo[c] = std::min(lo[c], comps[c]);
      hi[c] = std::max(hi[c], comps[c]);
      sum[c] += comps[c];
    }
  }
  const double n = static_cast<double>(samples.size());
  for (int c = 0; c < 3; ++c) {
    out.amplitude[c] = 0.5 * (hi[c] - lo[c]);
    out.mean[c] = sum[c] / n;
  }
  out.lateral_amplitude = 0.5 * (out.amplitude[0] + out.amplitude[1]);

  if (out.lateral_amplitude < 1e-12) {
    out.error = StatsError::kDegenerateTrace;
    return out;
  }

  // delta: population std-dev of the lateral magnitude normalized by the
  // lateral amplitude. A perfect circular trace has constant magnitude and
  // scores 0.
  double mean_m = 0.0;
  for (const ForceSample& s : samples) {
    mean_m += std::hypot(s.force.x, s.force.y) / out.lateral_amplitude;
  }
  mean_m /= n;
  double var = 0.0;
  for (const ForceSample& s : samples) {
    double m = std::hypot(s.force.x, s.force.y) / out.lateral_amplitude;
    var += (m - mean_m) * (m - mean_m);
  }
  out.delta = std::sqrt(var / n);
  return out;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw std::invalid_argument("anova: need at least two groups");
  }
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw std::invalid_argument("anova: every group needs at least 2 values");
    }
    total += g.size();
  }

  double grand_sum = 0.0;
  for (const auto& g : groups) {
    for (double v : g) grand_sum += v;
  }
  const double grand_mean = grand_sum / static_cast<double>(total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : g) ss_within += (v - mean) * (v - mean);
  }

  AnovaResult out;
  out.df_between = static_cast<int>(groups.size()) - 1;
  out.df_within = static_cast<int>(total - groups.size());
  out.ss_between = ss_between;
  out.ss_within = ss_within;

  if (ss_between == 0.0) {
    // Identical group means: nothing to explain regardless of the noise.
    out.f = 0.0;
    out.p = 1.0;
    return out;
  }
  if (ss_within == 0.0) {
    out.error = AnovaError::kZeroWithinVariance;
    return out;
  }

  double ms_between = ss_between / out.df_between;
  double ms_within = ss_within / out.df_within;
  out.f = ms_between / ms_within;
  out.p = f_distribution_tail(out.f, out.df_between, out.df_within);
  return out;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-30;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0) || !(x <= 1.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: domain violation");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // Use the fraction on the side that converges fast.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(x, a, b) / a;
  }
  return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double f_distribution_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw std::invalid_argument("f_distribution_tail: degrees of freedom must be positive");
  }
  if (f <= 0.0) return 1.0;
  double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(x, d2 / 2.0, d1 / 2.0);
}

}  // namespace delta
