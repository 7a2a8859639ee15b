#pragma once

#include <array>
#include <limits>

#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"

namespace meshonet {

// Per-cell maximum included angle plus validity counters. Histogram bins are
// 5 degrees wide over [90, 180]; out-of-range values land in the edge bins.
struct QualityReport {
  double mean_max_angle = 0.0;   // degrees, mean over cells
  double worst_angle = 0.0;      // degrees, max over cells
  std::array<long, 18> histogram{};
  long cell_count = 0;
  long degenerate_cells = 0;     // cells with coincident corners (flagged 360)
  long inverted_cells = 0;
  // max distance between mesh boundary points and the matching curve samples;
  // NaN when no geometry was supplied
  double boundary_deviation = std::numeric_limits<double>::quiet_NaN();
};

// Angle of each cell: max over the 4 interior corner angles, degrees.
// Degenerate corners (coincident points) flag the cell as 360.
// Cells are ordered row-major (eta outer); O-topology includes the seam cell.
std::vector<double> cell_max_angles(const PhysMesh& mesh);

// Angle part of the report only (no inversion count, no boundary deviation).
QualityReport max_included_angle(const PhysMesh& mesh);

// Cells whose discrete Jacobian x_xi*y_eta - x_eta*y_xi (central differences
// at the cell center via bilinear corners) is <= 0.
long count_inverted(const PhysMesh& mesh);

// Max distance between boundary mesh points and the analytic curves evaluated
// at the matching lattice parameters.
double boundary_deviation(const PhysMesh& mesh, const GeometryCase& geom);

// Full report; boundary deviation filled only when geom is non-null.
QualityReport assess(const PhysMesh& mesh, const GeometryCase* geom = nullptr);

int histogram_bin(double angle_deg);  // 18 * 5-degree bins from 90

}  // namespace meshonet
