#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "delta/kinematics.hpp"

namespace delta::oracle {

namespace {

double closure_residual(const DeltaGeometry& g, const Vec3& wrist_local,
                        double theta) {
  Vec3 elbow{-g.upper_arm * std::cos(theta), 0.0, -g.upper_arm * std::sin(theta)};
  return (wrist_local - elbow).norm() - g.forearm;
}

}  // namespace

std::vector<double> scan_chain_roots(const DeltaGeometry& g, int chain,
                                     const Vec3& p, double resolution) {
  const Vec3 w = chain_frame(g, chain, p);
  std::vector<double> roots;

  const double lo = -kPi;
  const double hi = kPi;
  const auto steps = static_cast<std::size_t>((hi - lo) / resolution);
  double prev_theta = lo;
  double prev_res = closure_residual(g, w, prev_theta);
  for (std::size_t i = 1; i <= steps; ++i) {
    double theta = lo + static_cast<double>(i) * resolution;
    if (theta > hi) theta = hi;
    double res = closure_residual(g, w, theta);
    if (prev_res == 0.0) {
      roots.push_back(prev_theta);
    } else if ((prev_res < 0.0) != (res < 0.0)) {
      double a = prev_theta, b = theta;
      double fa = prev_res;
      for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (a + b);
        double fm = closure_residual(g, w, m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_theta = theta;
    prev_res = res;
  }
  // Tangency (double root) can slip through a sign scan; good enough for the
  // interior points the tests use.
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::optional<double> scan_selected_root(const DeltaGeometry& g, int chain,
                                         const Vec3& p, double resolution) {
  std::vector<double> roots = scan_chain_roots(g, chain, p, resolution);
  if (roots.empty()) return std::nullopt;
  double best = roots.front();
  double best_x = -g.upper_arm * std::cos(best);
  for (double r : roots) {
    double x = -g.upper_arm * std::cos(r);
    if (x < best_x - 1e-12 || (std::fabs(x - best_x) <= 1e-12 && r > best)) {
      best = r;
      best_x = x;
    }
  }
  return best;
}

std::optional<double> equal_angle_height(const DeltaGeometry& g, double theta) {
  // With equal angles the wrist sits on the axis at (-c, 0, z) in every
  // chain frame; the closure is monotone in z below the elbow height.
  const Vec3 elbow{-g.upper_arm * std::cos(theta), 0.0,
                   -g.upper_arm * std::sin(theta)};
  const double c = g.radial_offset();
  auto residual = [&](double z) {
    Vec3 w{-c, 0.0, z};
    return (w - elbow).norm() - g.forearm;
  };
  double hi = elbow.z;            // closest approach in z
  double lo = elbow.z - g.forearm;  // certainly beyond the sphere
  if (residual(hi) > 0.0) return std::nullopt;  // axis outside the sphere
  double flo = residual(lo);
  if (flo < 0.0) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (lo + hi);
    if (residual(m) > 0.0) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

double ray_scan_disc_radius(const WorkspaceMap& map, int k, int rays,
                            double step) {
  const GridSpec& grid = map.grid;
  double coverage = std::min(std::min(-grid.x_min, grid.x_max),
                             std::min(-grid.y_min, grid.y_max));
  double best = coverage;
  for (int r = 0; r < rays; ++r) {
    double a = 2.0 * kPi * r / rays;
    double ca = std::cos(a), sa = std::sin(a);
    for (double t = 0.0; t <= coverage + grid.spacing; t += step) {
      double x = t * ca, y = t * sa;
      int i = static_cast<int>(std::llround((x - grid.x_min) / grid.spacing));
      int j = static_cast<int>(std::llround((y - grid.y_min) / grid.spacing));
      if (i < 0 || i >= grid.nx() || j < 0 || j >= grid.ny()) break;
      if (!map.cell(i, j, k)) {
        best = std::min(best, std::hypot(grid.x(i), grid.y(j)));
        break;
      }
    }
  }
  return best;
}

double bisect_capability(const DeltaGeometry& g, const JointAngles& angles,
                         const Vec3& direction, double torque_limit) {
  Vec3 dir = direction.normalized();
  auto feasible = [&](double s) {
    auto j = jacobian(g, angles);
    if (!j) return false;
    Vec3 tau = j->transpose_apply(dir * s);
    return std::fabs(tau.x) <= torque_limit && std::fabs(tau.y) <= torque_limit &&
           std::fabs(tau.z) <= torque_limit;
  };
  double lo = 0.0, hi = 1.0;
  while (feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("capability bisection diverged");
  }
  for (int it = 0; it < 100; ++it) {
    double m = 0.5 * (lo + hi);
    if (feasible(m)) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double beta_log_norm(double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
}

double beta_density(double t, double a, double b, double log_norm) {
  if (t <= 0.0 || t >= 1.0) {
    // Integrable endpoint singularities for a<1 or b<1; the tests stay away.
    return 0.0;
  }
  return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
}

double adaptive_simpson(double lo, double hi, double flo, double fmid, double fhi,
                        double whole, double a, double b, double log_norm,
                        double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = beta_density(lm, a, b, log_norm);
  double frm = beta_density(rm, a, b, log_norm);
  double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(lo, mid, flo, flm, fmid, left, a, b, log_norm,
                          tol * 0.5, depth - 1) +
         adaptive_simpson(mid, hi, fmid, frm, fhi, right, a, b, log_norm,
                          tol * 0.5, depth - 1);
}

}  // namespace

double quadrature_incomplete_beta(double x, double a, double b, double tol) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double log_norm = beta_log_norm(a, b);
  double flo = beta_density(0.0, a, b, log_norm);
  double fhi = beta_density(x, a, b, log_norm);
  double fmid = beta_density(0.5 * x, a, b, log_norm);
  double whole = x / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(0.0, x, flo, fmid, fhi, whole, a, b, log_norm, tol, 40);
}

Vec3 sphere_pole_plane_normal(double radius, double apex_height,
                              double cone_angle) {
  // Apex on the polar axis; rays at cone_angle off -z, azimuths 0/120/240.
  const Vec3 apex{0.0, 0.0, radius + apex_height};
  std::array<Vec3, 3> hits;
  for (int k = 0; k < 3; ++k) {
    double psi = 2.0 * kPi * k / 3.0;
    Vec3 dir{std::sin(cone_angle) * std::cos(psi),
             std::sin(cone_angle) * std::sin(psi), -std::cos(cone_angle)};
    // |apex + t dir| = radius, nearest positive root.
    double bq = 2.0 * apex.dot(dir);
    double cq = apex.squared_norm() - radius * radius;
    double disc = bq * bq - 4.0 * cq;
    if (disc < 0.0) throw std::runtime_error("oracle ray misses the sphere");
    double t = (-bq - std::sqrt(disc)) / 2.0;
    hits[k] = apex + dir * t;
  }
  Vec3 n = (hits[1] - hits[0]).cross(hits[2] - hits[0]).normalized();
  if (n.z < 0.0) n = -n;
  return n;
}

}  // namespace delta::oracle
