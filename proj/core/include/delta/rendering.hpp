#pragma once

#include <array>
#include <optional>

#include "delta/mesh.hpp"
#include "delta/vec3.hpp"

namespace delta {

struct RayHit {
  Vec3 point;
  Vec3 normal;  // face normal of the hit triangle, unit
  double t = 0.0;
  int triangle = -1;
};

/// Nearest intersection of the ray origin + t*direction with the mesh,
/// t > 1e-12. Direction need not be unit (t scales accordingly); ties go to
/// the lowest triangle index.
std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Vec3& origin,
                               const Vec3& direction);

enum class SurfaceQueryError {
  kOk,
  kNotOnSurface,  // p farther than the tolerance from every triangle
};

struct SurfaceNormal {
  Vec3 normal;
  int triangle = -1;
  SurfaceQueryError error = SurfaceQueryError::kOk;

  bool ok() const { return error == SurfaceQueryError::kOk; }
};

/// Face normal of the triangle containing p (within tol of its plane and
/// edges). Ties resolved toward the lowest triangle index.
SurfaceNormal surface_normal_at(const SurfaceMesh& mesh, const Vec3& p,
                                double tol = 1e-6);

/// Smoothed contact frame: three rays from an apex perched above the contact
/// point, fanned cone_angle off the inward surface normal; the plane through
/// their hit points filters out mesh faceting.
struct ReferencePlane {
  std::array<Vec3, 3> points;
  Vec3 normal;     // unit, oriented toward the apex side
  double offset;   // signed plane offset, normal . x = offset on the plane
  Vec3 apex;

  /// Signed distance of q below the plane (positive = penetrating).
  double penetration_of(const Vec3& q) const {
    return offset - normal.dot(q);
  }
};

enum class RenderError {
  kOk,
  kNotOnSurface,     // contact point not on the mesh
  kPatchIncomplete,  // fewer than three ray hits (count in hits)
};

struct PlaneResult {
  ReferencePlane plane;
  RenderError error = RenderError::kOk;
  int hits = 0;

  bool ok() const { return error == RenderError::kOk; }
};

/// Builds the reference plane at a contact point on the mesh. The apex sits
/// apex_height along the surface normal at contact; rays leave the apex at
/// cone_angle off the negated normal, azimuths 0/120/240 degrees about a
/// deterministic tangent basis.
PlaneResult reference_plane(const SurfaceMesh& mesh, const Vec3& contact,
                            double apex_height, double cone_angle);

struct ContactForce {
  ForceVector force;          // zero when not in contact
  double penetration = 0.0;   // signed, positive inside the surface
  bool contact = false;
  RenderError error = RenderError::kOk;
  int hits = 3;

  bool ok() const { return error == RenderError::kOk; }
};

/// Spring force against the reference plane: projects the finger to the
/// nearest surface point, builds the plane there, and applies
/// F = stiffness * penetration * plane_normal (zero above the surface).
ContactForce render_force(const SurfaceMesh& mesh, const Vec3& finger,
                          double stiffness, double apex_height,
                          double cone_angle);

}  // namespace delta
