#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "delta/geometry.hpp"
#include "delta/kinematics.hpp"

namespace delta {

/// Axis-aligned sampling grid, inclusive of both ends on each axis.
struct GridSpec {
  double x_min = -0.05, x_max = 0.05;
  double y_min = -0.05, y_max = 0.05;
  double z_min = -0.09, z_max = -0.01;
  double spacing = 0.001;

  int nx() const;
  int ny() const;
  int nz() const;
  double x(int i) const { return x_min + i * spacing; }
  double y(int j) const { return y_min + j * spacing; }
  double z(int k) const { return z_min + k * spacing; }
};

/// Reachability raster plus the derived coverage summary.
struct WorkspaceMap {
  GridSpec grid;
  std::vector<std::uint8_t> cells;  // x fastest, then y, then z
  std::size_t reachable_count = 0;

  // Best lateral slice: the height whose inscribed axis-centred disc of
  // reachable cells is largest.
  double best_z = 0.0;
  double best_disc_radius = 0.0;
  int best_z_index = -1;

  bool cell(int i, int j, int k) const {
    return cells[(static_cast<std::size_t>(k) * grid.ny() + j) * grid.nx() + i] != 0;
  }
  bool empty() const { return reachable_count == 0; }
};

/// Samples reachability at every cell centre. The per-slice disc radius is
/// the distance from the axis to the nearest unreachable cell centre, capped
/// by the lateral extent the grid actually covers.
WorkspaceMap sample_workspace(const DeltaGeometry& g, const JointLimits& limits,
                              const GridSpec& grid);

/// Inscribed-disc radius of one z slice (exposed for analysis/tests).
double slice_disc_radius(const WorkspaceMap& map, int k);

/// Writes `x,y,z,reachable` rows (header included, 9 decimal places).
void write_workspace_csv(const WorkspaceMap& map, std::ostream& out);

}  // namespace delta
