#pragma once

// Test-only oracles, kept independent of the library implementations they
// check: brute-force segment intersection, shoelace orientation counting,
// and a plain-loop model forward pass.

#include <cmath>
#include <vector>

#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"
#include "meshonet/model.hpp"

namespace oracle {

using meshonet::Point2;

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// orientation sign with a dead zone: fused-multiply contraction leaves
// +-1e-17 noise on exactly collinear points, which must read as zero
inline int orient_sign(double cr) {
  constexpr double eps = 1e-13;
  if (cr > eps) return 1;
  if (cr < -eps) return -1;
  return 0;
}

inline bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  return p.x >= std::min(a.x, b.x) - 1e-13 && p.x <= std::max(a.x, b.x) + 1e-13 &&
         p.y >= std::min(a.y, b.y) - 1e-13 && p.y <= std::max(a.y, b.y) + 1e-13;
}

// proper or improper intersection of closed segments [a,b] and [c,d]
inline bool segments_intersect(const Point2& a, const Point2& b, const Point2& c,
                               const Point2& d) {
  const int d1 = orient_sign(cross(c, d, a));
  const int d2 = orient_sign(cross(c, d, b));
  const int d3 = orient_sign(cross(a, b, c));
  const int d4 = orient_sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

// brute force over all non-adjacent segment pairs of a closed polyline
inline bool polyline_self_intersects(const std::vector<Point2>& loop) {
  const size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // cyclic adjacency: consecutive segments share an endpoint by design
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(loop[i], loop[(i + 1) % n], loop[j], loop[(j + 1) % n]))
        return true;
    }
  }
  return false;
}

inline bool loops_intersect(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()]))
        return true;
  return false;
}

// signed shoelace area of the lattice-order quad (00 -> 10 -> 11 -> 01)
inline double cell_signed_area(const meshonet::PhysMesh& m, int i, int j) {
  const int in = m.wrap_i(i + 1);
  const double x0 = m.xat(i, j), y0 = m.yat(i, j);
  const double x1 = m.xat(in, j), y1 = m.yat(in, j);
  const double x2 = m.xat(in, j + 1), y2 = m.yat(in, j + 1);
  const double x3 = m.xat(i, j + 1), y3 = m.yat(i, j + 1);
  return 0.5 * ((x0 * y1 - x1 * y0) + (x1 * y2 - x2 * y1) + (x2 * y3 - x3 * y2) +
                (x3 * y0 - x0 * y3));
}

// orientation-based inverted-cell count; valid H cells wind counterclockwise
// (positive area), valid O cells clockwise
inline long shoelace_inverted_count(const meshonet::PhysMesh& m) {
  const double sign = m.topology == meshonet::Topology::O ? -1.0 : 1.0;
  long count = 0;
  for (int j = 0; j < m.cells_eta(); ++j)
    for (int i = 0; i < m.cells_xi(); ++i)
      if (sign * cell_signed_area(m, i, j) <= 0.0) ++count;
  return count;
}

// plain nested-loop evaluation of the operator network; no Eigen, std::tanh
inline std::pair<double, double> naive_forward(const meshonet::MeshONetModel& model,
                                               const meshonet::SensorTrace& trace, double xi,
                                               double eta) {
  const auto& spec = model.spec;
  auto run_mlp = [&](const std::vector<int>& widths, long offset,
                     std::vector<double> a) -> std::vector<double> {
    const double* p = model.theta.data() + offset;
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
      const int rows = widths[l + 1], cols = widths[l];
      std::vector<double> z(rows, 0.0);
      for (int c = 0; c < cols; ++c)      // column-major weight blob
        for (int r = 0; r < rows; ++r) z[r] += p[size_t(c) * rows + r] * a[c];
      for (int r = 0; r < rows; ++r) z[r] += p[size_t(rows) * cols + r];
      p += size_t(rows) * cols + rows;
      if (l + 2 < widths.size())
        for (auto& v : z) v = std::tanh(v);
      a = std::move(z);
    }
    return a;
  };
  std::vector<double> lift(size_t(spec.lift.dim()));
  lift[0] = std::sin(xi);
  lift[1] = std::cos(xi);
  lift[2] = std::sin(eta);
  lift[3] = std::cos(eta);
  double px = 1.0, pe = 1.0;
  for (int d = 0; d < spec.lift.q; ++d) {
    px *= xi;
    pe *= eta;
    lift[4 + 2 * size_t(d)] = px;
    lift[5 + 2 * size_t(d)] = pe;
  }
  const auto bw = spec.branch_spec().widths, tw = spec.trunk_spec().widths;
  const auto bx = run_mlp(bw, meshonet::branch_x_offset(spec), trace.u1);
  const auto by = run_mlp(bw, meshonet::branch_y_offset(spec), trace.u2);
  const auto t = run_mlp(tw, meshonet::trunk_offset(spec), lift);
  double x = model.bias_x(), y = model.bias_y();
  for (int i = 0; i < spec.k; ++i) {
    x += bx[size_t(i)] * t[size_t(i)];
    y += by[size_t(i)] * t[size_t(i)];
  }
  return {x, y};
}

}  // namespace oracle
