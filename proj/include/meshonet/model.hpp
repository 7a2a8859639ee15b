#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "meshonet/geometry.hpp"
#include "meshonet/mesh.hpp"

namespace meshonet {

// Fixed feature expansion of a computational point:
//   [sin xi, cos xi, sin eta, cos eta, xi, eta, xi^2, eta^2, ..., xi^q, eta^q]
struct LiftConfig {
  int q = 5;  // maximum polynomial degree, >= 1
  int dim() const { return 4 + 2 * q; }
};

void lift_into(double xi, double eta, const LiftConfig& cfg, double* out);
Eigen::VectorXd lift(double xi, double eta, const LiftConfig& cfg);
// columns of `points` are (xi, eta); returns dim x n feature matrix
Eigen::MatrixXd lift_batch(const Eigen::Matrix2Xd& points, const LiftConfig& cfg);

// Fully connected network: tanh on every layer except the final linear one.
struct MLPSpec {
  std::vector<int> widths;  // input, hidden..., output

  int layer_count() const { return int(widths.size()) - 1; }
  long param_count() const;
  void validate(const std::string& name) const;
};

struct ModelSpec {
  int m = 128;  // sensors per branch input
  int k = 100;  // latent width shared by branches and trunk
  LiftConfig lift{5};
  std::vector<int> branch_hidden{128, 128};
  std::vector<int> trunk_hidden{128, 128, 128};

  MLPSpec branch_spec() const;  // m -> hidden -> k
  MLPSpec trunk_spec() const;   // lift.dim() -> hidden -> k
  long param_count() const;     // 2 branches + trunk + 2 output biases
  void validate() const;
};

// Parameters live in one flat vector:
//   [branch_x layers (W col-major, then b) | branch_y | trunk | bias_x | bias_y]
struct MeshONetModel {
  ModelSpec spec;
  Eigen::VectorXd theta;
  std::uint64_t seed = 0;

  double bias_x() const { return theta[theta.size() - 2]; }
  double bias_y() const { return theta[theta.size() - 1]; }
};

// Weights uniform on (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero,
// reproducible bit-for-bit from the seed.
MeshONetModel init_model(const ModelSpec& spec, std::uint64_t seed);

// offsets of the three parameter segments inside theta
long branch_x_offset(const ModelSpec& spec);
long branch_y_offset(const ModelSpec& spec);
long trunk_offset(const ModelSpec& spec);

// Evaluate the operator at the given points (columns are (xi, eta)).
// Branch networks run once per trace; the trunk runs per point. Returns a
// 2 x n matrix of (x, y).
Eigen::Matrix2Xd forward(const MeshONetModel& model, const SensorTrace& trace,
                         const Eigen::Matrix2Xd& points);

// Full-lattice forward in PhysMesh storage order.
PhysMesh forward_mesh(const MeshONetModel& model, const SensorTrace& trace, const CompGrid& grid);

enum class PointTag { Interior = 0, Boundary = 1 };

struct TaggedPoint {
  double xi = 0.0;
  double eta = 0.0;
  PointTag tag = PointTag::Interior;
  double tx = 0.0;  // target x
  double ty = 0.0;  // target y
};

struct TraceBatch {
  const SensorTrace* trace = nullptr;
  const std::vector<TaggedPoint>* points = nullptr;
};

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Weighted squared-error objective, summed per trace and averaged over
// traces; exact reverse-mode gradients. Trunk gradients accumulate from both
// coordinate paths.
LossGrad loss_and_gradients(const MeshONetModel& model, const std::vector<TraceBatch>& batch,
                            double w_int, double w_bnd);

// loss only (same reduction), for cheap full-grid evaluation
double loss_only(const MeshONetModel& model, const std::vector<TraceBatch>& batch, double w_int,
                 double w_bnd);

}  // namespace meshonet
