#include "delta/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "delta/format.hpp"

namespace delta {

namespace {

int axis_count(double lo, double hi, double spacing) {
  return static_cast<int>(std::llround((hi - lo) / spacing)) + 1;
}

}  // namespace

int GridSpec::nx() const { return axis_count(x_min, x_max, spacing); }
int GridSpec::ny() const { return axis_count(y_min, y_max, spacing); }
int GridSpec::nz() const { return axis_count(z_min, z_max, spacing); }

double slice_disc_radius(const WorkspaceMap& map, int k) {
  const GridSpec& grid = map.grid;
  // The disc can never be claimed beyond the lateral region the grid covers.
  double coverage = std::min(std::min(-grid.x_min, grid.x_max),
                             std::min(-grid.y_min, grid.y_max));
  if (coverage < 0.0) return 0.0;

  double best = coverage;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (map.cell(i, j, k)) continue;
      double r = std::hypot(grid.x(i), grid.y(j));
      best = std::min(best, r);
    }
  }
  return best;
}

WorkspaceMap sample_workspace(const DeltaGeometry& g, const JointLimits& limits,
                              const GridSpec& grid) {
  if (!(grid.spacing > 0.0) || grid.x_max < grid.x_min ||
      grid.y_max < grid.y_min || grid.z_max < grid.z_min) {
    throw std::invalid_argument("workspace: malformed grid spec");
  }

  WorkspaceMap map;
  map.grid = grid;
  const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
  map.cells.assign(static_cast<std::size_t>(nx) * ny * nz, 0);

  std::size_t idx = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i, ++idx) {
        Vec3 p{grid.x(i), grid.y(j), grid.z(k)};
        if (reachable(g, p, limits)) {
          map.cells[idx] = 1;
          ++map.reachable_count;
        }
      }
    }
  }

  if (map.reachable_count == 0) return map;

  for (int k = 0; k < nz; ++k) {
    double r = slice_disc_radius(map, k);
    if (r > map.best_disc_radius) {
      map.best_disc_radius = r;
      map.best_z = grid.z(k);
      map.best_z_index = k;
    }
  }
  // All-unreachable slices give radius 0; make sure best_z is set even when
  // every slice scored 0 but some cells are reachable.
  if (map.best_z_index < 0) {
    map.best_z_index = 0;
    map.best_z = grid.z(0);
  }
  return map;
}

void write_workspace_csv(const WorkspaceMap& map, std::ostream& out) {
  const GridSpec& grid = map.grid;
  out << "x,y,z,reachable\n";
  std::size_t idx = 0;
  for (int k = 0; k < grid.nz(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i, ++idx) {
        out << fixed9(grid.x(i)) << ',' << fixed9(grid.y(j)) << ','
            << fixed9(grid.z(k)) << ',' << int(map.cells[idx]) << '\n';
      }
    }
  }
}

}  // namespace delta
