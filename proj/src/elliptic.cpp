#include "meshonet/elliptic.hpp"

#include <chrono>
#include <cmath>

#include "meshonet/errors.hpp"
#include "meshonet/quality.hpp"
#include "meshonet/tfi.hpp"

namespace meshonet {

namespace {

struct Stencil {
  double xw, xe, xs, xn;      // xi-/xi+/eta-/eta+ neighbors
  double yw, ye, ys, yn;
  double x_cross, y_cross;    // 4-corner sums for the mixed derivative
};

inline Stencil gather(const PhysMesh& m, int i, int j) {
  const int iw = m.wrap_i(i - 1), ie = m.wrap_i(i + 1);
  Stencil s;
  s.xw = m.xat(iw, j);
  s.xe = m.xat(ie, j);
  s.xs = m.xat(i, j - 1);
  s.xn = m.xat(i, j + 1);
  s.yw = m.yat(iw, j);
  s.ye = m.yat(ie, j);
  s.ys = m.yat(i, j - 1);
  s.yn = m.yat(i, j + 1);
  s.x_cross = m.xat(ie, j + 1) - m.xat(ie, j - 1) - m.xat(iw, j + 1) + m.xat(iw, j - 1);
  s.y_cross = m.yat(ie, j + 1) - m.yat(ie, j - 1) - m.yat(iw, j + 1) + m.yat(iw, j - 1);
  return s;
}

inline WinslowCoefficients coefficients(const Stencil& s) {
  const double x_xi = 0.5 * (s.xe - s.xw);
  const double x_eta = 0.5 * (s.xn - s.xs);
  const double y_xi = 0.5 * (s.ye - s.yw);
  const double y_eta = 0.5 * (s.yn - s.ys);
  return {x_eta * x_eta + y_eta * y_eta, x_xi * x_eta + y_xi * y_eta,
          x_xi * x_xi + y_xi * y_xi};
}

}  // namespace

WinslowCoefficients winslow_coefficients_at(const PhysMesh& mesh, int i, int j) {
  return coefficients(gather(mesh, i, j));
}

double ResidualField::max_abs() const {
  double m = 0.0;
  for (double v : rx) m = std::max(m, std::fabs(v));
  for (double v : ry) m = std::max(m, std::fabs(v));
  return m;
}

ResidualField winslow_residual(const PhysMesh& mesh) {
  if (mesh.n_xi < 3 || mesh.n_eta < 3)
    throw ContractError("winslow_residual needs at least 3 points per direction");
  ResidualField f;
  f.n_xi = mesh.n_xi;
  f.n_eta = mesh.n_eta;
  f.rx.assign(mesh.point_count(), 0.0);
  f.ry.assign(mesh.point_count(), 0.0);
  const int i_begin = mesh.topology == Topology::O ? 0 : 1;
  const int i_end = mesh.topology == Topology::O ? mesh.n_xi : mesh.n_xi - 1;
  for (int j = 1; j < mesh.n_eta - 1; ++j) {
    for (int i = i_begin; i < i_end; ++i) {
      const Stencil s = gather(mesh, i, j);
      const auto [alpha, beta, gamma] = coefficients(s);
      const double xc = mesh.xat(i, j), yc = mesh.yat(i, j);
      f.rx[mesh.idx(i, j)] = alpha * (s.xe - 2.0 * xc + s.xw) - 0.5 * beta * s.x_cross +
                             gamma * (s.xn - 2.0 * xc + s.xs);
      f.ry[mesh.idx(i, j)] = alpha * (s.ye - 2.0 * yc + s.yw) - 0.5 * beta * s.y_cross +
                             gamma * (s.yn - 2.0 * yc + s.ys);
    }
  }
  return f;
}

double sor_sweep(PhysMesh& mesh, double omega) {
  const int i_begin = mesh.topology == Topology::O ? 0 : 1;
  const int i_end = mesh.topology == Topology::O ? mesh.n_xi : mesh.n_xi - 1;
  double max_update = 0.0;
  for (int j = 1; j < mesh.n_eta - 1; ++j) {
    for (int i = i_begin; i < i_end; ++i) {
      const Stencil s = gather(mesh, i, j);
      const auto [alpha, beta, gamma] = coefficients(s);
      const double denom = 2.0 * (alpha + gamma);
      if (denom == 0.0) continue;  // fully degenerate stencil; leave the point
      const double x_new =
          (alpha * (s.xe + s.xw) + gamma * (s.xn + s.xs) - 0.5 * beta * s.x_cross) / denom;
      const double y_new =
          (alpha * (s.ye + s.yw) + gamma * (s.yn + s.ys) - 0.5 * beta * s.y_cross) / denom;
      const double dx = omega * (x_new - mesh.xat(i, j));
      const double dy = omega * (y_new - mesh.yat(i, j));
      mesh.xat(i, j) += dx;
      mesh.yat(i, j) += dy;
      // NaN must poison the sweep maximum (std::max would drop it)
      const double upd = std::max(std::fabs(dx), std::fabs(dy));
      if (std::isnan(upd) || upd > max_update) max_update = upd;
    }
  }
  return max_update;
}

long SolverConfig::effective_max_iters(int n_xi, int n_eta) const {
  if (max_iters > 0) return max_iters;
  const long n = std::max(n_xi, n_eta);
  return 100L * n * n;
}

void SolverConfig::validate() const {
  if (!(omega > 0.0 && omega < 2.0))
    throw ConfigError("relaxation omega must lie in (0, 2), got " + std::to_string(omega));
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 1 (or 0 for the default)");
}

SolveResult elliptic_solve(const GeometryCase& geom, const CompGrid& grid,
                           const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult res;
  if (cfg.init) {
    if (cfg.init->n_xi != grid.n_xi || cfg.init->n_eta != grid.n_eta ||
        cfg.init->topology != grid.topology)
      throw ContractError("init mesh dimensions do not match the grid");
    res.mesh = *cfg.init;
    if (boundary_deviation(res.mesh, geom) > 1e-12)
      throw GeometryError("init mesh boundary does not match the case boundary");
  } else {
    res.mesh = tfi_generate(geom, grid);
  }

  const long max_sweeps = cfg.effective_max_iters(grid.n_xi, grid.n_eta);
  res.update_log.reserve(std::min<long>(max_sweeps, 1 << 20));
  for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
    const double upd = sor_sweep(res.mesh, cfg.omega);
    res.update_log.push_back(upd);
    res.iterations = sweep;
    if (!std::isfinite(upd))
      throw NumericError("elliptic solve diverged (non-finite update) at sweep " +
                         std::to_string(sweep));
    if (upd < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace meshonet
