#pragma once

#include <string>
#include <vector>

#include "meshonet/geometry.hpp"

namespace meshonet {

// Uniform computational lattice. H: xi_i = i/(n_xi-1), eta_j = j/(n_eta-1).
// O: xi is periodic with xi_i = i/n_xi (no duplicated seam column), eta as H.
struct CompGrid {
  int n_xi = 0;
  int n_eta = 0;
  Topology topology = Topology::H;

  CompGrid(int nx, int ne, Topology t);

  double xi(int i) const {
    return topology == Topology::O ? double(i) / n_xi : double(i) / (n_xi - 1);
  }
  double eta(int j) const { return double(j) / (n_eta - 1); }
};

// Physical coordinates of the mapped lattice. Storage is row-major with eta
// outer: index(i, j) = j*n_xi + i. For O-topology the xi direction wraps.
struct PhysMesh {
  int n_xi = 0;
  int n_eta = 0;
  Topology topology = Topology::H;
  std::vector<double> x;
  std::vector<double> y;

  PhysMesh() = default;
  PhysMesh(int nx, int ne, Topology t)
      : n_xi(nx), n_eta(ne), topology(t), x(size_t(nx) * ne, 0.0), y(size_t(nx) * ne, 0.0) {}

  size_t idx(int i, int j) const { return size_t(j) * n_xi + i; }
  int wrap_i(int i) const {
    if (topology == Topology::O) return (i % n_xi + n_xi) % n_xi;
    return i;
  }
  double& xat(int i, int j) { return x[idx(i, j)]; }
  double& yat(int i, int j) { return y[idx(i, j)]; }
  double xat(int i, int j) const { return x[idx(i, j)]; }
  double yat(int i, int j) const { return y[idx(i, j)]; }
  size_t point_count() const { return x.size(); }

  // cells per direction: O-topology wraps, so every column starts a cell
  int cells_xi() const { return topology == Topology::O ? n_xi : n_xi - 1; }
  int cells_eta() const { return n_eta - 1; }
};

// ASCII mesh format, lossless for doubles:
//   MESHONET 1 <H|O>
//   <n_xi> <n_eta>
//   <x> <y>          one point per line, row-major (eta outer, xi inner),
//                    coordinates printed with 17 significant digits
void write_mesh(const PhysMesh& mesh, const std::string& path);
PhysMesh read_mesh(const std::string& path);

}  // namespace meshonet
