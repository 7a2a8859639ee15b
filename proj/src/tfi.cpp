#include "meshonet/tfi.hpp"

#include <cmath>

#include "meshonet/errors.hpp"

namespace meshonet {

namespace {

constexpr double kCornerTol = 1e-12;

void require_match(const Point2& a, const Point2& b, const char* what) {
  if (dist(a, b) > kCornerTol)
    throw GeometryError(std::string("boundary contract violated: ") + what +
                        " differ by more than 1e-12");
}

}  // namespace

PhysMesh tfi_generate(const GeometryCase& geom, const CompGrid& grid) {
  if (geom.topology != grid.topology)
    throw ContractError("geometry topology does not match grid topology");
  PhysMesh mesh(grid.n_xi, grid.n_eta, grid.topology);

  if (grid.topology == Topology::O) {
    const auto& inner = geom.curve(CurveSide::Inner);
    const auto& outer = geom.curve(CurveSide::Outer);
    require_match(inner(0.0), inner(1.0), "inner loop endpoints");
    require_match(outer(0.0), outer(1.0), "outer loop endpoints");
    for (int i = 0; i < grid.n_xi; ++i) {
      const Point2 pi = inner(grid.xi(i));
      const Point2 po = outer(grid.xi(i));
      for (int j = 0; j < grid.n_eta; ++j) {
        const double e = grid.eta(j);
        mesh.xat(i, j) = (1.0 - e) * pi.x + e * po.x;
        mesh.yat(i, j) = (1.0 - e) * pi.y + e * po.y;
      }
    }
    return mesh;
  }

  const auto& south = geom.curve(CurveSide::South);
  const auto& east = geom.curve(CurveSide::East);
  const auto& north = geom.curve(CurveSide::North);
  const auto& west = geom.curve(CurveSide::West);

  const Point2 p00 = south(0.0), p10 = south(1.0);
  const Point2 p01 = north(0.0), p11 = north(1.0);
  require_match(p10, east(0.0), "south(1) and east(0)");
  require_match(east(1.0), p11, "east(1) and north(1)");
  require_match(p01, west(1.0), "north(0) and west(1)");
  require_match(west(0.0), p00, "west(0) and south(0)");

  std::vector<Point2> s(grid.n_xi), n(grid.n_xi), w(grid.n_eta), e(grid.n_eta);
  for (int i = 0; i < grid.n_xi; ++i) {
    s[i] = south(grid.xi(i));
    n[i] = north(grid.xi(i));
  }
  for (int j = 0; j < grid.n_eta; ++j) {
    w[j] = west(grid.eta(j));
    e[j] = east(grid.eta(j));
  }

  for (int j = 1; j < grid.n_eta - 1; ++j) {
    const double v = grid.eta(j);
    for (int i = 1; i < grid.n_xi - 1; ++i) {
      const double u = grid.xi(i);
      mesh.xat(i, j) = (1.0 - v) * s[i].x + v * n[i].x + (1.0 - u) * w[j].x + u * e[j].x -
                       ((1.0 - u) * (1.0 - v) * p00.x + u * (1.0 - v) * p10.x +
                        (1.0 - u) * v * p01.x + u * v * p11.x);
      mesh.yat(i, j) = (1.0 - v) * s[i].y + v * n[i].y + (1.0 - u) * w[j].y + u * e[j].y -
                       ((1.0 - u) * (1.0 - v) * p00.y + u * (1.0 - v) * p10.y +
                        (1.0 - u) * v * p01.y + u * v * p11.y);
    }
  }
  // boundary points are the curve samples themselves; south/north win the corners
  for (int j = 0; j < grid.n_eta; ++j) {
    mesh.xat(0, j) = w[j].x;
    mesh.yat(0, j) = w[j].y;
    mesh.xat(grid.n_xi - 1, j) = e[j].x;
    mesh.yat(grid.n_xi - 1, j) = e[j].y;
  }
  for (int i = 0; i < grid.n_xi; ++i) {
    mesh.xat(i, 0) = s[i].x;
    mesh.yat(i, 0) = s[i].y;
    mesh.xat(i, grid.n_eta - 1) = n[i].x;
    mesh.yat(i, grid.n_eta - 1) = n[i].y;
  }
  return mesh;
}

}  // namespace meshonet
