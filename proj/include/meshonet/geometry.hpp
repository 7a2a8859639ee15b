#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace meshonet {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Single-block grid layouts: H is a four-sided patch, O is an annular grid
// periodic in xi around an inner boundary.
enum class Topology { H, O };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

// Edges of the computational square. For H-topology: south is the eta=0 edge
// (xi varies), north eta=1, west the xi=0 edge (eta varies), east xi=1.
// O-topology uses two closed loops: inner at eta=0, outer at eta=1.
enum class CurveSide { South, East, North, West, Inner, Outer };

// Parametric boundary curve over t in [0,1]. O-topology loops are periodic:
// eval(1) == eval(0) bit-exactly.
struct BoundaryCurve {
  CurveSide side = CurveSide::South;
  std::function<Point2(double)> eval;

  Point2 operator()(double t) const { return eval(t); }
};

// A complete domain boundary plus family metadata. Curve order is fixed:
// H: {south, east, north, west}; O: {inner, outer}.
struct GeometryCase {
  Topology topology = Topology::H;
  std::vector<BoundaryCurve> curves;
  std::string family_id;
  double param = 0.0;

  const BoundaryCurve& curve(CurveSide s) const;
};

// --- geometry families -----------------------------------------------------
// Unit-square footprint whose north edge bulges as y = 1 + curvature*sin(pi t).
GeometryCase make_arch(double curvature);           // curvature in [0, 1]
// North/south edges become two-segment polylines with apexes at
// (0.5, 1+offset) and (0.5, -offset).
GeometryCase make_hexagon(double angle_offset);     // offset in [0, 0.4]
// South edge carries an upward semicircular bump of radius 0.15 centered at
// (shift, 0), parametrized by arc length.
GeometryCase make_shifted_semicircle(double shift); // shift in [0.25, 0.75]
// O-topology annulus: inner circle of radius 0.1 at (0.5, hole_y), outer
// unit-square loop; both counterclockwise, seam on the +x ray from the hole.
GeometryCase make_annulus_hole(double hole_y);      // hole_y in [0.35, 0.65]

// Dispatch by family id: "arch", "hexagon", "semicircle", "annulus".
GeometryCase make_case(const std::string& family_id, double param);
Topology family_topology(const std::string& family_id);

// --- sensor sub-sampling ----------------------------------------------------
// A fixed boundary location: curve index into GeometryCase::curves plus
// parameter t. The layout is chosen once per dataset and never varies across
// geometries.
struct SensorParam {
  int curve = 0;
  double t = 0.0;
};
using SensorLayout = std::vector<SensorParam>;

// Equispaced-in-t layout: sensors split evenly across curves (remainder to
// the first curves). H edges use closed spacing t = j/(n-1); O loops use
// half-open periodic spacing t = j/n.
SensorLayout make_sensor_layout(Topology topology, int m);

// Boundary functions u1, u2 sampled at the fixed sensors.
struct SensorTrace {
  int m = 0;
  std::vector<double> u1;  // boundary x at each sensor
  std::vector<double> u2;  // boundary y at each sensor
};

SensorTrace sample_sensors(const GeometryCase& c, int m, const SensorLayout& layout);

// Closed boundary polylines sampled at n points per curve: one loop for H
// (counterclockwise, corners deduplicated), two loops for O. Used by
// validation and the `geometry dump` CLI.
std::vector<std::vector<Point2>> boundary_loops(const GeometryCase& c, int points_per_curve);

}  // namespace meshonet
