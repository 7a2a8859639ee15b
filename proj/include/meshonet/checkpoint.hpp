#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshonet/geometry.hpp"
#include "meshonet/model.hpp"

namespace meshonet {

// Training provenance stored next to the parameters so `infer` can rebuild
// the exact sensor sampling the model was trained with.
struct CheckpointMeta {
  std::string family;
  Topology topology = Topology::H;
  SensorLayout layout;
  std::vector<double> train_params;
  std::uint64_t iterations = 0;
  double final_loss = 0.0;
};

struct Checkpoint {
  MeshONetModel model;
  CheckpointMeta meta;
};

// Versioned little-endian binary container: magic + header + raw f64
// parameter blob. Round-trips parameters bit-exactly.
void save_checkpoint(const std::string& path, const MeshONetModel& model,
                     const CheckpointMeta& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace meshonet
