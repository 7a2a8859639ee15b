#pragma once

#include <vector>

#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"

namespace meshonet {

// Metric coefficients of the quasi-linear elliptic mesh system, evaluated
// from central differences with unit computational spacing.
struct WinslowCoefficients {
  double alpha = 0.0;  // x_eta^2 + y_eta^2
  double beta = 0.0;   // x_xi*x_eta + y_xi*y_eta
  double gamma = 0.0;  // x_xi^2 + y_xi^2
};

// Coefficients at interior point (i, j); xi wraps for O-topology.
WinslowCoefficients winslow_coefficients_at(const PhysMesh& mesh, int i, int j);

// Per-point residual of alpha*x_xixi - 2 beta*x_xieta + gamma*x_etaeta (and y)
// at interior points; zero on Dirichlet boundaries.
struct ResidualField {
  int n_xi = 0;
  int n_eta = 0;
  std::vector<double> rx;
  std::vector<double> ry;

  double max_abs() const;
};

ResidualField winslow_residual(const PhysMesh& mesh);

// One point-SOR sweep in lattice order (eta outer, xi inner). Each interior
// point is set to the local 9-point stencil solution with frozen neighbors
// and coefficients from the current iterate, relaxed by omega. Returns the
// max absolute coordinate update applied.
double sor_sweep(PhysMesh& mesh, double omega);

struct SolverConfig {
  double omega = 1.3;         // in (0, 2)
  double tol = 1e-8;          // max absolute coordinate update per sweep
  long max_iters = 0;         // 0 -> 100 * max(n_xi, n_eta)^2
  const PhysMesh* init = nullptr;  // null -> TFI of the geometry

  long effective_max_iters(int n_xi, int n_eta) const;
  void validate() const;
};

struct SolveResult {
  PhysMesh mesh;
  long iterations = 0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<double> update_log;  // max update per sweep
};

// Winslow solve with Dirichlet boundaries held fixed. Non-convergence at
// max_iters is reported via the flag; NaN during sweeps throws NumericError
// naming the sweep.
SolveResult elliptic_solve(const GeometryCase& geom, const CompGrid& grid,
                           const SolverConfig& cfg);

}  // namespace meshonet
