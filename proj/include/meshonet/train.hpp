#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshonet/adam.hpp"
#include "meshonet/dataset.hpp"
#include "meshonet/errors.hpp"
#include "meshonet/model.hpp"
#include "meshonet/quality.hpp"

namespace meshonet {

enum class Protocol { Interpolation, Extrapolation, LeaveOneOut };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

struct Split {
  Protocol protocol = Protocol::Interpolation;
  std::vector<double> train_params;
  std::vector<double> test_params;
};

// Enforces: disjoint parameter sets; interpolation tests strictly inside the
// train range; extrapolation tests strictly outside. Throws ConfigError.
void validate_split(const Split& split);

struct TrainConfig {
  long iterations = 100000;
  int interior_batch = 256;   // random interior lattice points per trace per iteration
  double lr = 1e-3;
  double lr_decay = 1.0;      // multiplicative factor applied every lr_decay_every iters
  long lr_decay_every = 0;    // 0 disables the schedule
  long lr_hold = 0;           // iterations at full lr before the decay starts
  double w_int = 1.0;
  double w_bnd = 1.0;
  std::uint64_t seed = 0;
  long eval_interval = 100;
  AdamConfig adam;            // lr is driven by the schedule above

  double lr_at(long iteration) const;  // 1-based
};

struct LossRecord {
  long iteration = 0;
  double loss = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  MeshONetModel model;
  std::vector<LossRecord> history;
};

// Thrown when the loss goes non-finite; carries the last parameters that
// produced a finite loss so callers can checkpoint them.
struct TrainingAborted : NumericError {
  long iteration;
  Eigen::VectorXd last_good_theta;

  TrainingAborted(long it, Eigen::VectorXd theta)
      : NumericError("training loss went non-finite at iteration " + std::to_string(it)),
        iteration(it),
        last_good_theta(std::move(theta)) {}
};

// Supervised training on the train-split samples only. Each iteration draws a
// fresh uniform interior subset per trace (all boundary points always
// included), takes one Adam step on the trace-averaged loss, and records the
// loss every eval_interval iterations. Bit-reproducible from the seed.
TrainResult train(MeshONetModel model, const Dataset& ds, const Split& split,
                  const TrainConfig& cfg);

struct EvalRow {
  double param = 0.0;
  double rel_l2 = 0.0;  // sqrt(sum (pred - target)^2 / sum target^2) over the grid
  QualityReport quality;
  double forward_seconds = 0.0;
};

// sqrt(sum (pred - ref)^2 / sum ref^2) over all coordinates; 0 when both
// sums vanish, +inf when only the reference does
double relative_l2(const PhysMesh& pred, const PhysMesh& ref);

// Full-grid forward pass and comparison against the elliptic targets for the
// given params (which must exist in the dataset).
std::vector<EvalRow> evaluate(const MeshONetModel& model, const Dataset& ds,
                              const std::vector<double>& params);

// Training objective evaluated on the full lattice of one sample (all
// interior + all boundary points, no subsampling).
double full_grid_loss(const MeshONetModel& model, const Dataset& ds, const Sample& sample,
                      double w_int, double w_bnd);

void write_history_csv(const std::vector<LossRecord>& history, const std::string& path);
// deterministic columns only; timings go elsewhere so reruns are byte-identical
void write_eval_csv(const std::vector<EvalRow>& rows, const std::string& path);
void write_timings_csv(const std::vector<EvalRow>& rows, const std::string& path);

// Tagged full-lattice point list for one sample (targets from its mesh).
std::vector<TaggedPoint> lattice_points(const Dataset& ds, const Sample& sample);

}  // namespace meshonet
