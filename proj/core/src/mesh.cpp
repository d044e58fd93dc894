#include "delta/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "delta/format.hpp"

namespace delta {

namespace {

// Token stream that remembers source lines so parse errors can point at them.
struct TokenStream {
  std::vector<std::pair<std::string, int>> tokens;
  std::size_t pos = 0;

  explicit TokenStream(std::istream& in) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.emplace_back(tok, line_no);
    }
  }

  bool done() const { return pos >= tokens.size(); }
  int line() const {
    if (done()) return tokens.empty() ? 0 : tokens.back().second;
    return tokens[pos].second;
  }
  std::string next(const char* what) {
    if (done()) throw MeshError(std::string("unexpected end of file, expected ") + what, line());
    return tokens[pos++].first;
  }
  double next_double(const char* what) {
    int at = line();
    std::string tok = next(what);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw MeshError("expected number for " + std::string(what) + ", got '" + tok + "'", at);
    }
  }
  long next_int(const char* what) {
    int at = line();
    std::string tok = next(what);
    try {
      std::size_t used = 0;
      long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw MeshError("expected integer for " + std::string(what) + ", got '" + tok + "'", at);
    }
  }
};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void finalize_mesh(SurfaceMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  mesh.normals.clear();
  mesh.normals.reserve(mesh.triangles.size());

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int idx : tri) {
      if (idx < 0 || idx >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                            std::to_string(idx) + " out of range",
                        0);
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex", 0);
    }
    Vec3 a = mesh.vertices[tri[0]];
    Vec3 e1 = mesh.vertices[tri[1]] - a;
    Vec3 e2 = mesh.vertices[tri[2]] - a;
    Vec3 n = e1.cross(e2);
    double len = n.norm();
    if (len < 1e-12) {
      throw MeshError("triangle " + std::to_string(t) + " is degenerate (zero area)", 0);
    }
    mesh.normals.push_back(n / len);
  }

  // Winding check. Only a closed mesh (every undirected edge shared by
  // exactly two triangles) pins down a global orientation; for those, a
  // directed edge appearing twice means two faces disagree.
  std::map<std::pair<int, int>, int> undirected;
  std::map<std::pair<int, int>, int> directed;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int i = tri[k];
      int j = tri[(k + 1) % 3];
      undirected[{std::min(i, j), std::max(i, j)}]++;
      directed[{i, j}]++;
    }
  }
  bool closed = !undirected.empty() &&
                std::all_of(undirected.begin(), undirected.end(),
                            [](const auto& e) { return e.second == 2; });
  if (closed) {
    for (const auto& e : directed) {
      if (e.second > 1) {
        throw MeshError("closed mesh has inconsistent winding at edge " +
                            std::to_string(e.first.first) + "-" +
                            std::to_string(e.first.second),
                        0);
      }
    }
  }
}

SurfaceMesh load_off(std::istream& in) {
  TokenStream ts(in);
  int at = ts.line();
  std::string magic = ts.next("OFF header");
  if (magic != "OFF") throw MeshError("not an OFF file (missing OFF header)", at);

  long nv = ts.next_int("vertex count");
  long nf = ts.next_int("face count");
  ts.next_int("edge count");
  if (nv < 0 || nf < 0) throw MeshError("negative element count", ts.line());

  SurfaceMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    double x = ts.next_double("vertex x");
    double y = ts.next_double("vertex y");
    double z = ts.next_double("vertex z");
    mesh.vertices.push_back({x, y, z});
  }
  mesh.triangles.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    int at_face = ts.line();
    long arity = ts.next_int("face vertex count");
    if (arity != 3) {
      throw MeshError("face " + std::to_string(f) + " has " + std::to_string(arity) +
                          " vertices, only triangles are supported",
                      at_face);
    }
    int a = static_cast<int>(ts.next_int("face index"));
    int b = static_cast<int>(ts.next_int("face index"));
    int c = static_cast<int>(ts.next_int("face index"));
    mesh.triangles.push_back({a, b, c});
  }
  try {
    finalize_mesh(mesh);
  } catch (const MeshError& e) {
    throw MeshError(e.what(), e.line);
  }
  return mesh;
}

SurfaceMesh load_stl_ascii(std::istream& in) {
  SurfaceMesh mesh;
  std::string line;
  int line_no = 0;
  int state = 0;  // 0 expect solid, 1 expect facet/endsolid, 2 outer loop,
                  // 3..5 vertices, 6 endloop, 7 endfacet
  int seen_vertices = 0;
  bool ended = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    kw = lowercase(kw);

    switch (state) {
      case 0:
        if (kw != "solid") throw MeshError("expected 'solid'", line_no);
        state = 1;
        break;
      case 1:
        if (kw == "endsolid") {
          ended = true;
          state = 8;
          break;
        }
        if (kw != "facet") throw MeshError("expected 'facet' or 'endsolid'", line_no);
        state = 2;
        break;
      case 2:
        if (kw != "outer") throw MeshError("expected 'outer loop'", line_no);
        state = 3;
        seen_vertices = 0;
        break;
      case 3:
      case 4:
      case 5: {
        if (kw != "vertex") throw MeshError("expected 'vertex'", line_no);
        double x, y, z;
        if (!(ls >> x >> y >> z) || !std::isfinite(x) || !std::isfinite(y) ||
            !std::isfinite(z)) {
          throw MeshError("malformed vertex coordinates", line_no);
        }
        mesh.vertices.push_back({x, y, z});
        ++seen_vertices;
        ++state;
        break;
      }
      case 6:
        if (kw != "endloop") throw MeshError("expected 'endloop'", line_no);
        state = 7;
        break;
      case 7: {
        if (kw != "endfacet") throw MeshError("expected 'endfacet'", line_no);
        int base = static_cast<int>(mesh.vertices.size()) - 3;
        mesh.triangles.push_back({base, base + 1, base + 2});
        state = 1;
        break;
      }
      case 8:
        break;  // trailing content ignored
    }
  }
  if (!ended) throw MeshError("missing 'endsolid'", line_no);
  (void)seen_vertices;
  finalize_mesh(mesh);
  return mesh;
}

SurfaceMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  std::string ext;
  auto dot = path.rfind('.');
  if (dot != std::string::npos) ext = lowercase(path.substr(dot + 1));
  if (ext == "off") return load_off(in);
  if (ext == "stl") return load_stl_ascii(in);
  throw std::runtime_error("unsupported mesh format (expected .off or .stl): " + path);
}

void write_off(const SurfaceMesh& mesh, std::ostream& out) {
  out << "OFF\n"
      << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Vec3& v : mesh.vertices) {
    out << fixed9(v.x) << ' ' << fixed9(v.y) << ' ' << fixed9(v.z) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

SurfaceMesh make_rectangle(double x_min, double x_max, double y_min,
                           double y_max, double z0) {
  SurfaceMesh mesh;
  mesh.vertices = {{x_min, y_min, z0}, {x_max, y_min, z0},
                   {x_max, y_max, z0}, {x_min, y_max, z0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  finalize_mesh(mesh);
  return mesh;
}

SurfaceMesh make_icosphere(double radius, int level) {
  if (radius <= 0.0 || level < 0) {
    throw std::invalid_argument("icosphere: radius must be positive, level >= 0");
  }
  // Polar-aligned icosahedron: poles plus two staggered rings of five at
  // latitude atan(1/2). Keeping a vertex exactly on +z makes pole-contact
  // tests well defined.
  const double lat_z = 1.0 / std::sqrt(5.0);
  const double lat_r = 2.0 / std::sqrt(5.0);
  SurfaceMesh mesh;
  mesh.vertices.push_back({0.0, 0.0, 1.0});
  for (int k = 0; k < 5; ++k) {
    double a = 2.0 * std::numbers::pi * k / 5.0;
    mesh.vertices.push_back({lat_r * std::cos(a), lat_r * std::sin(a), lat_z});
  }
  for (int k = 0; k < 5; ++k) {
    double a = 2.0 * std::numbers::pi * k / 5.0 + std::numbers::pi / 5.0;
    mesh.vertices.push_back({lat_r * std::cos(a), lat_r * std::sin(a), -lat_z});
  }
  mesh.vertices.push_back({0.0, 0.0, -1.0});

  for (int k = 0; k < 5; ++k) {
    int k1 = (k + 1) % 5;
    mesh.triangles.push_back({0, 1 + k, 1 + k1});
    mesh.triangles.push_back({1 + k, 6 + k, 1 + k1});
    mesh.triangles.push_back({1 + k1, 6 + k, 6 + k1});
    mesh.triangles.push_back({11, 6 + k1, 6 + k});
  }

  for (int pass = 0; pass < level; ++pass) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = ((mesh.vertices[i] + mesh.vertices[j]) * 0.5).normalized();
      int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(m);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      int ab = mid(t[0], t[1]);
      int bc = mid(t[1], t[2]);
      int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }

  for (Vec3& v : mesh.vertices) v = v * radius;
  finalize_mesh(mesh);
  return mesh;
}

namespace {

// Ericson, Real-Time Collision Detection, closest point on a triangle.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return a + ab * v;
  }

  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return a + ac * w;
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + (c - b) * w;
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return a + ab * v + ac * w;
}

}  // namespace

ClosestPoint closest_point(const SurfaceMesh& mesh, const Vec3& p) {
  ClosestPoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    Vec3 q = closest_on_triangle(p, mesh.triangle_vertex(t, 0),
                                 mesh.triangle_vertex(t, 1),
                                 mesh.triangle_vertex(t, 2));
    double d2 = (q - p).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best.point = q;
      best.triangle = static_cast<int>(t);
    }
  }
  if (best.triangle >= 0) best.distance = std::sqrt(best_d2);
  return best;
}

}  // namespace delta
