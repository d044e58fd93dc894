#include "delta/rendering.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace delta {

namespace {

constexpr double kRayEpsilon = 1e-12;

// Moller-Trumbore. Returns t in ray parameter units, or nullopt.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir,
                                         const Vec3& a, const Vec3& b,
                                         const Vec3& c) {
  Vec3 e1 = b - a;
  Vec3 e2 = c - a;
  Vec3 pvec = dir.cross(e2);
  double det = e1.dot(pvec);
  if (std::fabs(det) < 1e-12) return std::nullopt;  // parallel to the plane
  double inv = 1.0 / det;
  Vec3 tvec = origin - a;
  double u = tvec.dot(pvec) * inv;
  if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
  Vec3 qvec = tvec.cross(e1);
  double v = dir.dot(qvec) * inv;
  if (v < -1e-12 || u + v > 1.0 + 1e-12) return std::nullopt;
  double t = e2.dot(qvec) * inv;
  if (t <= kRayEpsilon) return std::nullopt;
  return t;
}

// Deterministic tangent basis for a unit normal: project the axis least
// aligned with n.
void tangent_basis(const Vec3& n, Vec3& u, Vec3& v) {
  Vec3 seed = (std::fabs(n.x) <= 0.9) ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  u = (seed - n * seed.dot(n)).normalized();
  v = n.cross(u);
}

}  // namespace

std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Vec3& origin,
                               const Vec3& direction) {
  std::optional<RayHit> best;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    auto hit_t = intersect_triangle(origin, direction, mesh.triangle_vertex(t, 0),
                                    mesh.triangle_vertex(t, 1),
                                    mesh.triangle_vertex(t, 2));
    if (!hit_t) continue;
    if (!best || *hit_t < best->t) {
      RayHit h;
      h.t = *hit_t;
      h.point = origin + direction * h.t;
      h.normal = mesh.normals[t];
      h.triangle = static_cast<int>(t);
      best = h;
    }
  }
  return best;
}

SurfaceNormal surface_normal_at(const SurfaceMesh& mesh, const Vec3& p,
                                double tol) {
  SurfaceNormal out;
  ClosestPoint cp = closest_point(mesh, p);
  if (cp.triangle < 0 || cp.distance > tol) {
    out.error = SurfaceQueryError::kNotOnSurface;
    return out;
  }
  out.normal = mesh.normals[cp.triangle];
  out.triangle = cp.triangle;
  return out;
}

PlaneResult reference_plane(const SurfaceMesh& mesh, const Vec3& contact,
                            double apex_height, double cone_angle) {
  PlaneResult out;
  SurfaceNormal sn = surface_normal_at(mesh, contact);
  if (!sn.ok()) {
    out.error = RenderError::kNotOnSurface;
    return out;
  }

  const Vec3 n = sn.normal;
  const Vec3 apex = contact + n * apex_height;
  Vec3 u, v;
  tangent_basis(n, u, v);

  const double s = std::sin(cone_angle);
  const double c = std::cos(cone_angle);
  std::array<Vec3, 3> hits;
  int hit_count = 0;
  for (int k = 0; k < 3; ++k) {
    double psi = 2.0 * std::numbers::pi * k / 3.0;
    Vec3 dir = (-n) * c + (u * std::cos(psi) + v * std::sin(psi)) * s;
    auto hit = ray_cast(mesh, apex, dir);
    if (hit) hits[hit_count++] = hit->point;
  }
  if (hit_count < 3) {
    out.error = RenderError::kPatchIncomplete;
    out.hits = hit_count;
    return out;
  }

  Vec3 pn = (hits[1] - hits[0]).cross(hits[2] - hits[0]);
  double pn_len = pn.norm();
  if (pn_len < 1e-15) {
    // Collapsed patch; treat as incomplete rather than invent a frame.
    out.error = RenderError::kPatchIncomplete;
    out.hits = hit_count;
    return out;
  }
  pn = pn / pn_len;
  // Orientation: toward the apex side.
  if (pn.dot(apex - hits[0]) < 0.0) pn = -pn;

  out.plane.points = hits;
  out.plane.normal = pn;
  out.plane.offset = pn.dot(hits[0]);
  out.plane.apex = apex;
  out.hits = 3;
  return out;
}

ContactForce render_force(const SurfaceMesh& mesh, const Vec3& finger,
                          double stiffness, double apex_height,
                          double cone_angle) {
  ContactForce out;
  ClosestPoint cp = closest_point(mesh, finger);
  if (cp.triangle < 0) {
    out.error = RenderError::kNotOnSurface;
    out.hits = 0;
    return out;
  }

  PlaneResult pr = reference_plane(mesh, cp.point, apex_height, cone_angle);
  if (!pr.ok()) {
    out.error = pr.error;
    out.hits = pr.hits;
    return out;
  }

  double pen = pr.plane.penetration_of(finger);
  out.penetration = pen;
  if (pen > 0.0) {
    out.contact = true;
    out.force = pr.plane.normal * (stiffness * pen);
  }
  return out;
}

}  // namespace delta
