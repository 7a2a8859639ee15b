#include "meshonet/geometry.hpp"

#include <cmath>
#include <numbers>

#include "meshonet/errors.hpp"

namespace meshonet {

namespace {

constexpr double kPi = std::numbers::pi;

double lerp(double a, double b, double u) { return (1.0 - u) * a + u * b; }

Point2 lerp(const Point2& a, const Point2& b, double u) {
  return {lerp(a.x, b.x, u), lerp(a.y, b.y, u)};
}

// maps t in [0,1] onto [0,1) with 1 wrapping to 0, so closed loops evaluate
// eval(1) == eval(0) bit-exactly
double wrap01(double t) {
  double w = t - std::floor(t);
  return w;
}

BoundaryCurve straight(CurveSide side, Point2 a, Point2 b) {
  return {side, [a, b](double t) { return lerp(a, b, t); }};
}

// two equal-length segments a -> apex -> b; uniform t is arc length by symmetry
BoundaryCurve two_segment(CurveSide side, Point2 a, Point2 apex, Point2 b) {
  return {side, [a, apex, b](double t) {
            if (t <= 0.5) return lerp(a, apex, 2.0 * t);
            return lerp(apex, b, 2.0 * t - 1.0);
          }};
}

}  // namespace

std::string to_string(Topology t) { return t == Topology::H ? "H" : "O"; }

Topology topology_from_string(const std::string& s) {
  if (s == "H") return Topology::H;
  if (s == "O") return Topology::O;
  throw IoError("unknown topology '" + s + "'");
}

const BoundaryCurve& GeometryCase::curve(CurveSide s) const {
  for (const auto& c : curves)
    if (c.side == s) return c;
  throw ContractError("geometry case has no curve for requested side");
}

GeometryCase make_arch(double curvature) {
  if (!(curvature >= 0.0 && curvature <= 1.0))
    throw DomainParamError("arch curvature must lie in [0, 1], got " + std::to_string(curvature));
  GeometryCase c;
  c.topology = Topology::H;
  c.family_id = "arch";
  c.param = curvature;
  c.curves.push_back(straight(CurveSide::South, {0, 0}, {1, 0}));
  c.curves.push_back(straight(CurveSide::East, {1, 0}, {1, 1}));
  c.curves.push_back({CurveSide::North, [curvature](double t) {
                        return Point2{t, 1.0 + curvature * std::sin(kPi * t)};
                      }});
  c.curves.push_back(straight(CurveSide::West, {0, 0}, {0, 1}));
  return c;
}

GeometryCase make_hexagon(double angle_offset) {
  if (!(angle_offset >= 0.0 && angle_offset <= 0.4))
    throw DomainParamError("hexagon offset must lie in [0, 0.4], got " +
                           std::to_string(angle_offset));
  GeometryCase c;
  c.topology = Topology::H;
  c.family_id = "hexagon";
  c.param = angle_offset;
  c.curves.push_back(two_segment(CurveSide::South, {0, 0}, {0.5, -angle_offset}, {1, 0}));
  c.curves.push_back(straight(CurveSide::East, {1, 0}, {1, 1}));
  c.curves.push_back(two_segment(CurveSide::North, {0, 1}, {0.5, 1.0 + angle_offset}, {1, 1}));
  c.curves.push_back(straight(CurveSide::West, {0, 0}, {0, 1}));
  return c;
}

GeometryCase make_shifted_semicircle(double shift) {
  if (!(shift >= 0.25 && shift <= 0.75))
    throw DomainParamError("semicircle shift must lie in [0.25, 0.75], got " +
                           std::to_string(shift));
  constexpr double r = 0.15;
  // flat - arc - flat, reparametrized over [0,1] by arc length
  const double len_left = shift - r;
  const double len_arc = kPi * r;
  const double len_right = 1.0 - shift - r;
  const double total = len_left + len_arc + len_right;
  const double t1 = len_left / total;
  const double t2 = (len_left + len_arc) / total;

  GeometryCase c;
  c.topology = Topology::H;
  c.family_id = "semicircle";
  c.param = shift;
  c.curves.push_back({CurveSide::South, [=](double t) {
                        if (t <= t1) return lerp(Point2{0, 0}, Point2{shift - r, 0}, t / t1);
                        if (t <= t2) {
                          const double theta = kPi * (t2 - t) / (t2 - t1);
                          return Point2{shift + r * std::cos(theta), r * std::sin(theta)};
                        }
                        return lerp(Point2{shift + r, 0}, Point2{1, 0}, (t - t2) / (1.0 - t2));
                      }});
  c.curves.push_back(straight(CurveSide::East, {1, 0}, {1, 1}));
  c.curves.push_back(straight(CurveSide::North, {0, 1}, {1, 1}));
  c.curves.push_back(straight(CurveSide::West, {0, 0}, {0, 1}));
  return c;
}

GeometryCase make_annulus_hole(double hole_y) {
  if (!(hole_y >= 0.35 && hole_y <= 0.65))
    throw DomainParamError("annulus hole_y must lie in [0.35, 0.65], got " +
                           std::to_string(hole_y));
  constexpr double r = 0.1;
  GeometryCase c;
  c.topology = Topology::O;
  c.family_id = "annulus";
  c.param = hole_y;
  c.curves.push_back({CurveSide::Inner, [hole_y](double t) {
                        const double theta = 2.0 * kPi * wrap01(t);
                        return Point2{0.5 + r * std::cos(theta), hole_y + r * std::sin(theta)};
                      }});
  // unit-square perimeter from the seam point (1, hole_y), counterclockwise,
  // parametrized by arc length (perimeter 4)
  c.curves.push_back({CurveSide::Outer, [hole_y](double t) {
                        double s = 4.0 * wrap01(t);
                        const double la = 1.0 - hole_y;
                        if (s <= la) return lerp(Point2{1, hole_y}, Point2{1, 1}, s / la);
                        s -= la;
                        if (s <= 1.0) return lerp(Point2{1, 1}, Point2{0, 1}, s);
                        s -= 1.0;
                        if (s <= 1.0) return lerp(Point2{0, 1}, Point2{0, 0}, s);
                        s -= 1.0;
                        if (s <= 1.0) return lerp(Point2{0, 0}, Point2{1, 0}, s);
                        s -= 1.0;
                        return lerp(Point2{1, 0}, Point2{1, hole_y}, s / hole_y);
                      }});
  return c;
}

GeometryCase make_case(const std::string& family_id, double param) {
  if (family_id == "arch") return make_arch(param);
  if (family_id == "hexagon") return make_hexagon(param);
  if (family_id == "semicircle") return make_shifted_semicircle(param);
  if (family_id == "annulus") return make_annulus_hole(param);
  throw ConfigError("unknown geometry family '" + family_id + "'");
}

Topology family_topology(const std::string& family_id) {
  if (family_id == "annulus") return Topology::O;
  if (family_id == "arch" || family_id == "hexagon" || family_id == "semicircle")
    return Topology::H;
  throw ConfigError("unknown geometry family '" + family_id + "'");
}

SensorLayout make_sensor_layout(Topology topology, int m) {
  if (m < 8) throw ContractError("sensor count must be >= 8, got " + std::to_string(m));
  const int n_curves = topology == Topology::H ? 4 : 2;
  SensorLayout layout;
  layout.reserve(m);
  for (int c = 0; c < n_curves; ++c) {
    const int n = m / n_curves + (c < m % n_curves ? 1 : 0);
    for (int j = 0; j < n; ++j) {
      double t;
      if (topology == Topology::O) {
        t = double(j) / n;  // periodic loop: half-open spacing
      } else {
        t = n == 1 ? 0.5 : double(j) / (n - 1);
      }
      layout.push_back({c, t});
    }
  }
  return layout;
}

SensorTrace sample_sensors(const GeometryCase& c, int m, const SensorLayout& layout) {
  if (static_cast<int>(layout.size()) != m)
    throw ContractError("sensor layout size " + std::to_string(layout.size()) +
                        " does not match m = " + std::to_string(m));
  SensorTrace trace;
  trace.m = m;
  trace.u1.resize(m);
  trace.u2.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto& s = layout[i];
    if (s.curve < 0 || s.curve >= static_cast<int>(c.curves.size()))
      throw ContractError("sensor curve index out of range");
    const Point2 p = c.curves[s.curve](s.t);
    trace.u1[i] = p.x;
    trace.u2[i] = p.y;
  }
  return trace;
}

std::vector<std::vector<Point2>> boundary_loops(const GeometryCase& c, int n) {
  if (n < 2) throw ContractError("boundary_loops needs >= 2 points per curve");
  std::vector<std::vector<Point2>> loops;
  if (c.topology == Topology::O) {
    for (const auto& curve : c.curves) {
      std::vector<Point2> loop;
      loop.reserve(n);
      for (int j = 0; j < n; ++j) loop.push_back(curve(double(j) / n));
      loops.push_back(std::move(loop));
    }
    return loops;
  }
  // single counterclockwise loop; north and west run in reverse, joint
  // points dropped so each corner appears once
  const auto& south = c.curve(CurveSide::South);
  const auto& east = c.curve(CurveSide::East);
  const auto& north = c.curve(CurveSide::North);
  const auto& west = c.curve(CurveSide::West);
  std::vector<Point2> loop;
  loop.reserve(4 * (n - 1));
  for (int j = 0; j < n - 1; ++j) loop.push_back(south(double(j) / (n - 1)));
  for (int j = 0; j < n - 1; ++j) loop.push_back(east(double(j) / (n - 1)));
  for (int j = n - 1; j > 0; --j) loop.push_back(north(double(j) / (n - 1)));
  for (int j = n - 1; j > 0; --j) loop.push_back(west(double(j) / (n - 1)));
  loops.push_back(std::move(loop));
  return loops;
}

}  // namespace meshonet
