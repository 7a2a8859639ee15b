#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshonet/elliptic.hpp"
#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"

namespace meshonet {

// One supervised pair: sensor trace in, elliptic ground-truth mesh out.
struct Sample {
  double param = 0.0;
  SensorTrace trace;
  PhysMesh target;
};

struct Dataset {
  std::string family;
  Topology topology = Topology::H;
  int n_xi = 0;
  int n_eta = 0;
  SensorLayout layout;
  SolverConfig solver;
  std::vector<Sample> samples;  // in the param order given at build time

  const Sample* find(double param) const;
  // FNV-1a hash of the canonical build configuration (family, resolution,
  // sensor layout, solver settings)
  std::uint64_t config_hash() const;
};

// Builds geometry -> TFI init -> elliptic solve -> sensor sampling for each
// parameter. Any rejected sample (non-convergence or inverted cells) fails
// the build with the reason. `jobs` caps concurrent solves; results are
// independent of the schedule.
Dataset build_dataset(const std::string& family, const std::vector<double>& params, int n_xi,
                      int n_eta, int sensors_m, const SolverConfig& solver, int jobs = 1);

// Manifest plus one trace file and one mesh file per sample, all plain text.
void write_dataset(const Dataset& ds, const std::string& dir);
Dataset read_dataset(const std::string& manifest_path);

void write_trace(const SensorTrace& trace, const std::string& path);
SensorTrace read_trace(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace meshonet
