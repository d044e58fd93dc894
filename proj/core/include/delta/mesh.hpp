#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "delta/vec3.hpp"

namespace delta {

/// Parse/validation failure; line is 1-based in the source file, 0 when the
/// problem is not tied to a specific line.
class MeshError : public std::runtime_error {
 public:
  MeshError(const std::string& message, int line_number)
      : std::runtime_error(message), line(line_number) {}
  int line;
};

/// Indexed triangle soup with per-face unit normals (right-hand rule from
/// vertex order). Loaders reject degenerate triangles and, for closed
/// meshes, inconsistent winding.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;  // one per triangle

  std::size_t triangle_count() const { return triangles.size(); }
  Vec3 triangle_vertex(int tri, int corner) const {
    return vertices[triangles[tri][corner]];
  }
  Vec3 centroid(int tri) const {
    return (triangle_vertex(tri, 0) + triangle_vertex(tri, 1) +
            triangle_vertex(tri, 2)) / 3.0;
  }
};

/// Computes normals, rejects zero-area triangles and bad indices, and for
/// closed meshes rejects inconsistent winding. Called by the loaders; call
/// it directly after building a mesh by hand.
void finalize_mesh(SurfaceMesh& mesh);

SurfaceMesh load_off(std::istream& in);
SurfaceMesh load_stl_ascii(std::istream& in);

/// Dispatches on extension (.off / .stl). Throws MeshError on parse or
/// validation failure, std::runtime_error when the file cannot be opened.
SurfaceMesh load_mesh(const std::string& path);

void write_off(const SurfaceMesh& mesh, std::ostream& out);

/// Two-triangle rectangle in the plane z = z0, outward normal +z.
SurfaceMesh make_rectangle(double x_min, double x_max, double y_min,
                           double y_max, double z0);

/// Icosphere centred at the origin, subdivided `level` times, vertices on the
/// sphere of the given radius. Oriented so one vertex sits at (0, 0, +radius).
SurfaceMesh make_icosphere(double radius, int level);

struct ClosestPoint {
  Vec3 point;
  int triangle = -1;
  double distance = 0.0;
};

/// Nearest point on the mesh surface to p (exhaustive over triangles; ties
/// resolved toward the lowest triangle index).
ClosestPoint closest_point(const SurfaceMesh& mesh, const Vec3& p);

}  // namespace delta
