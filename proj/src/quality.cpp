#include "meshonet/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "meshonet/errors.hpp"

namespace meshonet {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct P {
  double x, y;
};

// interior angle at corner `at` between rays to `a` and `b`; 360 marks a
// degenerate corner
double corner_angle(const P& at, const P& a, const P& b) {
  const double ux = a.x - at.x, uy = a.y - at.y;
  const double vx = b.x - at.x, vy = b.y - at.y;
  const double nu = std::sqrt(ux * ux + uy * uy);
  const double nv = std::sqrt(vx * vx + vy * vy);
  if (nu == 0.0 || nv == 0.0) return 360.0;
  const double c = std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

void check_cell_dims(const PhysMesh& mesh) {
  if (mesh.cells_xi() < 1 || mesh.cells_eta() < 1)
    throw ContractError("mesh has no cells (" + std::to_string(mesh.n_xi) + "x" +
                        std::to_string(mesh.n_eta) + ")");
}

}  // namespace

int histogram_bin(double angle_deg) {
  const int bin = int(std::floor((angle_deg - 90.0) / 5.0));
  return std::clamp(bin, 0, 17);
}

std::vector<double> cell_max_angles(const PhysMesh& mesh) {
  check_cell_dims(mesh);
  std::vector<double> out;
  out.reserve(size_t(mesh.cells_xi()) * mesh.cells_eta());
  for (int j = 0; j < mesh.cells_eta(); ++j) {
    for (int i = 0; i < mesh.cells_xi(); ++i) {
      const int in = mesh.wrap_i(i + 1);
      const P p00{mesh.xat(i, j), mesh.yat(i, j)};
      const P p10{mesh.xat(in, j), mesh.yat(in, j)};
      const P p11{mesh.xat(in, j + 1), mesh.yat(in, j + 1)};
      const P p01{mesh.xat(i, j + 1), mesh.yat(i, j + 1)};
      double m = corner_angle(p00, p10, p01);
      m = std::max(m, corner_angle(p10, p11, p00));
      m = std::max(m, corner_angle(p11, p01, p10));
      m = std::max(m, corner_angle(p01, p00, p11));
      out.push_back(m);
    }
  }
  return out;
}

QualityReport max_included_angle(const PhysMesh& mesh) {
  QualityReport rep;
  const std::vector<double> angles = cell_max_angles(mesh);
  rep.cell_count = long(angles.size());
  double sum = 0.0;
  for (double a : angles) {
    sum += a;
    rep.worst_angle = std::max(rep.worst_angle, a);
    if (a >= 360.0) ++rep.degenerate_cells;
    ++rep.histogram[histogram_bin(a)];
  }
  rep.mean_max_angle = sum / double(angles.size());
  return rep;
}

long count_inverted(const PhysMesh& mesh) {
  check_cell_dims(mesh);
  // H-topology: counterclockwise boundary traversal makes the lattice-order
  // Jacobian positive on valid cells. O-topology loops are both
  // counterclockwise with eta running inner -> outer, which reverses the
  // orientation (as polar coordinates ordered (theta, r) do), so there the
  // valid sign is negative.
  const double valid_sign = mesh.topology == Topology::O ? -1.0 : 1.0;
  long count = 0;
  for (int j = 0; j < mesh.cells_eta(); ++j) {
    for (int i = 0; i < mesh.cells_xi(); ++i) {
      const int in = mesh.wrap_i(i + 1);
      const double x00 = mesh.xat(i, j), y00 = mesh.yat(i, j);
      const double x10 = mesh.xat(in, j), y10 = mesh.yat(in, j);
      const double x01 = mesh.xat(i, j + 1), y01 = mesh.yat(i, j + 1);
      const double x11 = mesh.xat(in, j + 1), y11 = mesh.yat(in, j + 1);
      const double x_xi = 0.5 * ((x10 + x11) - (x00 + x01));
      const double x_eta = 0.5 * ((x01 + x11) - (x00 + x10));
      const double y_xi = 0.5 * ((y10 + y11) - (y00 + y01));
      const double y_eta = 0.5 * ((y01 + y11) - (y00 + y10));
      if (valid_sign * (x_xi * y_eta - x_eta * y_xi) <= 0.0) ++count;
    }
  }
  return count;
}

double boundary_deviation(const PhysMesh& mesh, const GeometryCase& geom) {
  const bool periodic = mesh.topology == Topology::O;
  auto xi = [&](int i) { return periodic ? double(i) / mesh.n_xi : double(i) / (mesh.n_xi - 1); };
  auto eta = [&](int j) { return double(j) / (mesh.n_eta - 1); };
  double worst = 0.0;
  auto check = [&](int i, int j, const BoundaryCurve& curve, double t) {
    const Point2 p = curve(t);
    const double dx = mesh.xat(i, j) - p.x, dy = mesh.yat(i, j) - p.y;
    worst = std::max(worst, std::sqrt(dx * dx + dy * dy));
  };
  if (periodic) {
    const auto& inner = geom.curve(CurveSide::Inner);
    const auto& outer = geom.curve(CurveSide::Outer);
    for (int i = 0; i < mesh.n_xi; ++i) {
      check(i, 0, inner, xi(i));
      check(i, mesh.n_eta - 1, outer, xi(i));
    }
    return worst;
  }
  const auto& south = geom.curve(CurveSide::South);
  const auto& north = geom.curve(CurveSide::North);
  const auto& west = geom.curve(CurveSide::West);
  const auto& east = geom.curve(CurveSide::East);
  for (int i = 0; i < mesh.n_xi; ++i) {
    check(i, 0, south, xi(i));
    check(i, mesh.n_eta - 1, north, xi(i));
  }
  for (int j = 1; j < mesh.n_eta - 1; ++j) {
    check(0, j, west, eta(j));
    check(mesh.n_xi - 1, j, east, eta(j));
  }
  return worst;
}

QualityReport assess(const PhysMesh& mesh, const GeometryCase* geom) {
  QualityReport rep = max_included_angle(mesh);
  rep.inverted_cells = count_inverted(mesh);
  if (geom) rep.boundary_deviation = boundary_deviation(mesh, *geom);
  return rep;
}

}  // namespace meshonet
