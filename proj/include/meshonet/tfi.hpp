#pragma once

#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"

namespace meshonet {

// Transfinite interpolation. H-topology: bilinear Coons patch over the four
// boundary curves; O-topology: linear radial blend between the two loops.
// Boundary rows/columns reproduce the curve samples exactly (south/north rows
// take precedence at the four corners).
PhysMesh tfi_generate(const GeometryCase& geom, const CompGrid& grid);

}  // namespace meshonet
