#include "delta/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace delta {

namespace {

// Wraps to (-pi, pi].
double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace

Vec3 chain_frame(const DeltaGeometry& g, int chain, const Vec3& p) {
  Vec3 r = rotated_z(p, -g.chain_azimuths[chain]);
  r.x -= g.radial_offset();
  return r;
}

Vec3 chain_to_base(const DeltaGeometry& g, int chain, const Vec3& p_local) {
  Vec3 r = p_local;
  r.x += g.radial_offset();
  return rotated_z(r, g.chain_azimuths[chain]);
}

Vec3 elbow_local(const DeltaGeometry& g, double theta) {
  // theta = 0 points the upper arm radially inward (-x); positive theta
  // swings the elbow below the base plane.
  return {-g.upper_arm * std::cos(theta), 0.0, -g.upper_arm * std::sin(theta)};
}

Vec3 elbow_base(const DeltaGeometry& g, int chain, double theta) {
  return chain_to_base(g, chain, elbow_local(g, theta));
}

ChainRoots chain_roots(const DeltaGeometry& g, int chain, const Vec3& p) {
  // Closure of one chain: the wrist must sit on the forearm sphere around
  // the elbow. With the elbow parameterization above this reduces to
  //   E cos(theta) + F sin(theta) = G
  //   E = 2 a x',  F = 2 a z',  G = b^2 - a^2 - |p'|^2
  // in the chain frame, solved by the phase-shift identity.
  const double a = g.upper_arm;
  const double b = g.forearm;
  Vec3 q = chain_frame(g, chain, p);

  const double e = 2.0 * a * q.x;
  const double f = 2.0 * a * q.z;
  const double gg = b * b - a * a - q.squared_norm();
  const double r = std::hypot(e, f);

  ChainRoots roots{0.0, 0.0, false};
  if (r < 1e-15) {
    // Wrist numerically at the shoulder: every angle closes iff G = 0.
    if (std::fabs(gg) < 1e-12) {
      roots = {0.0, 0.0, true};
    }
    return roots;
  }

  double c = gg / r;
  if (c > 1.0 + 1e-12 || c < -1.0 - 1e-12) return roots;
  c = std::clamp(c, -1.0, 1.0);

  const double phase = std::atan2(f, e);
  const double spread = std::acos(c);
  double ta = wrap_pi(phase + spread);
  double tb = wrap_pi(phase - spread);

  // Branch rule: keep the elbow toward the central axis, i.e. the root with
  // the smaller chain-frame elbow x = -a cos(theta), hence the larger
  // cos(theta). Exact ties (wrist in the base plane) break toward the
  // positive, downward-swinging root.
  double ca = std::cos(ta);
  double cb = std::cos(tb);
  bool pick_a;
  if (std::fabs(ca - cb) <= 1e-12) {
    pick_a = ta >= tb;
  } else {
    pick_a = ca > cb;
  }
  roots.selected = pick_a ? ta : tb;
  roots.other = pick_a ? tb : ta;
  roots.solvable = true;
  return roots;
}

IkResult inverse_kinematics(const DeltaGeometry& g, const Vec3& p,
                            const JointLimits& limits) {
  IkResult out;
  if (!p.finite()) {
    out.error = IkError::kInvalidInput;
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    ChainRoots roots = chain_roots(g, i, p);
    if (!roots.solvable) {
      out.error = IkError::kUnreachable;
      out.chain = i;
      return out;
    }
    if (!limits.contains(roots.selected)) {
      out.error = IkError::kJointLimit;
      out.chain = i;
      return out;
    }
    out.angles[i] = roots.selected;
  }
  return out;
}

IkResult inverse_kinematics_continuous(const DeltaGeometry& g, const Vec3& p,
                                       const JointAngles& previous,
                                       const JointLimits& limits) {
  IkResult out;
  if (!p.finite() || !previous.finite()) {
    out.error = IkError::kInvalidInput;
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    ChainRoots roots = chain_roots(g, i, p);
    if (!roots.solvable) {
      out.error = IkError::kUnreachable;
      out.chain = i;
      return out;
    }
    double pick = roots.selected;
    if (std::fabs(roots.other - previous[i]) < std::fabs(roots.selected - previous[i])) {
      pick = roots.other;
    }
    if (!limits.contains(pick)) {
      out.error = IkError::kJointLimit;
      out.chain = i;
      return out;
    }
    out.angles[i] = pick;
  }
  return out;
}

FkResult forward_kinematics(const DeltaGeometry& g, const JointAngles& angles) {
  FkResult out;
  if (!angles.finite()) {
    out.error = FkError::kInvalidInput;
    return out;
  }

  const Vec3 e1 = elbow_base(g, 0, angles[0]);
  const Vec3 e2 = elbow_base(g, 1, angles[1]);
  const Vec3 e3 = elbow_base(g, 2, angles[2]);
  const double b = g.forearm;

  // Trilateration: intersect the three forearm spheres. Build an orthonormal
  // frame on the elbow triangle and solve in it.
  Vec3 d21 = e2 - e1;
  double d = d21.norm();
  if (d < 1e-12) {
    out.error = FkError::kNoIntersection;
    return out;
  }
  Vec3 ex = d21 / d;
  Vec3 d31 = e3 - e1;
  double i2 = ex.dot(d31);
  Vec3 ey_raw = d31 - ex * i2;
  double ey_len = ey_raw.norm();
  if (ey_len < 1e-12) {
    out.error = FkError::kNoIntersection;  // colinear elbows
    return out;
  }
  Vec3 ey = ey_raw / ey_len;
  Vec3 ez = ex.cross(ey);
  double j2 = ey.dot(d31);

  double x = d / 2.0;  // equal radii
  double y = (i2 * i2 + j2 * j2) / (2.0 * j2) - (i2 / j2) * x;
  double h2 = b * b - x * x - y * y;
  // Allow tangency up to a 1e-9 m gap; beyond that the spheres truly miss.
  if (h2 < -1e-18) {
    out.error = FkError::kNoIntersection;
    return out;
  }
  double h = std::sqrt(std::max(h2, 0.0));

  Vec3 base = e1 + ex * x + ey * y;
  Vec3 cand_a = base + ez * h;
  Vec3 cand_b = base - ez * h;

  const bool a_below = cand_a.z < 0.0;
  const bool b_below = cand_b.z < 0.0;
  if (!a_below && !b_below) {
    out.error = FkError::kAboveBasePlane;
    return out;
  }
  if (a_below != b_below) {
    out.position = a_below ? cand_a : cand_b;
    return out;
  }

  // Both candidates below the base plane: prefer the one the branch rule
  // maps back to these angles, falling back to the lower solution.
  auto reproduces = [&](const Vec3& cand) {
    for (int i = 0; i < 3; ++i) {
      ChainRoots roots = chain_roots(g, i, cand);
      if (!roots.solvable) return false;
      if (std::fabs(roots.selected - angles[i]) > 1e-7) return false;
    }
    return true;
  };
  bool ra = reproduces(cand_a);
  bool rb = reproduces(cand_b);
  if (ra != rb) {
    out.position = ra ? cand_a : cand_b;
  } else {
    out.position = (cand_a.z <= cand_b.z) ? cand_a : cand_b;
  }
  return out;
}

std::optional<Mat3> jacobian(const DeltaGeometry& g, const JointAngles& angles,
                             double h) {
  Mat3 j;
  Vec3* cols[3] = {&j.col0, &j.col1, &j.col2};
  for (int i = 0; i < 3; ++i) {
    JointAngles plus = angles;
    JointAngles minus = angles;
    plus[i] += h;
    minus[i] -= h;
    FkResult fp = forward_kinematics(g, plus);
    FkResult fm = forward_kinematics(g, minus);
    if (!fp.ok() || !fm.ok()) return std::nullopt;
    *cols[i] = (fp.position - fm.position) / (2.0 * h);
  }
  return j;
}

bool reachable(const DeltaGeometry& g, const Vec3& p, const JointLimits& limits) {
  return inverse_kinematics(g, p, limits).ok();
}

}  // namespace delta
