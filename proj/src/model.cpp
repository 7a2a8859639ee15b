#include "meshonet/model.hpp"

#include <cmath>
#include <random>

#include "meshonet/errors.hpp"

namespace meshonet {

namespace {

// tanh via the exp identity; Eigen vectorizes exp for doubles, std::tanh is
// scalar and dominates inference time otherwise
void tanh_inplace(Eigen::MatrixXd& z) {
  z = 1.0 - 2.0 / ((2.0 * z.array()).exp() + 1.0);
}

struct LayerView {
  Eigen::Map<const Eigen::MatrixXd> W;
  Eigen::Map<const Eigen::VectorXd> b;
};

LayerView layer_view(const MLPSpec& spec, const double* base, int l) {
  long off = 0;
  for (int i = 0; i < l; ++i)
    off += long(spec.widths[i + 1]) * spec.widths[i] + spec.widths[i + 1];
  const int rows = spec.widths[l + 1], cols = spec.widths[l];
  return {Eigen::Map<const Eigen::MatrixXd>(base + off, rows, cols),
          Eigen::Map<const Eigen::VectorXd>(base + off + long(rows) * cols, rows)};
}

struct LayerGrad {
  Eigen::Map<Eigen::MatrixXd> gW;
  Eigen::Map<Eigen::VectorXd> gb;
};

LayerGrad layer_grad(const MLPSpec& spec, double* base, int l) {
  long off = 0;
  for (int i = 0; i < l; ++i)
    off += long(spec.widths[i + 1]) * spec.widths[i] + spec.widths[i + 1];
  const int rows = spec.widths[l + 1], cols = spec.widths[l];
  return {Eigen::Map<Eigen::MatrixXd>(base + off, rows, cols),
          Eigen::Map<Eigen::VectorXd>(base + off + long(rows) * cols, rows)};
}

// forward through all layers; acts[0] is the input, acts[l+1] the output of
// layer l (post-activation)
void mlp_forward(const MLPSpec& spec, const double* params, const Eigen::MatrixXd& input,
                 std::vector<Eigen::MatrixXd>& acts, const char* which) {
  const int L = spec.layer_count();
  acts.resize(L + 1);
  acts[0] = input;
  for (int l = 0; l < L; ++l) {
    const LayerView lv = layer_view(spec, params, l);
    acts[l + 1].noalias() = lv.W * acts[l];
    acts[l + 1].colwise() += lv.b;
    if (l + 1 < L) tanh_inplace(acts[l + 1]);
    if (!acts[l + 1].allFinite())
      throw NumericError(std::string(which) + " layer " + std::to_string(l) +
                         " produced a non-finite activation");
  }
}

// reverse pass; dOut is the gradient w.r.t. the network output and is
// consumed. Gradients accumulate into gparams (same layout as params).
void mlp_backward(const MLPSpec& spec, const double* params,
                  const std::vector<Eigen::MatrixXd>& acts, Eigen::MatrixXd dOut,
                  double* gparams) {
  const int L = spec.layer_count();
  for (int l = L - 1; l >= 0; --l) {
    if (l + 1 < L)  // tanh layer: d pre-activation = dOut * (1 - a^2)
      dOut.array() *= 1.0 - acts[l + 1].array().square();
    LayerGrad g = layer_grad(spec, gparams, l);
    g.gW.noalias() += dOut * acts[l].transpose();
    g.gb.noalias() += dOut.rowwise().sum();
    if (l > 0) {
      const LayerView lv = layer_view(spec, params, l);
      Eigen::MatrixXd dIn;
      dIn.noalias() = lv.W.transpose() * dOut;
      dOut.swap(dIn);
    }
  }
}

Eigen::VectorXd trace_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), long(v.size()));
}

}  // namespace

void lift_into(double xi, double eta, const LiftConfig& cfg, double* out) {
  out[0] = std::sin(xi);
  out[1] = std::cos(xi);
  out[2] = std::sin(eta);
  out[3] = std::cos(eta);
  double px = 1.0, pe = 1.0;
  for (int p = 0; p < cfg.q; ++p) {
    px *= xi;
    pe *= eta;
    out[4 + 2 * p] = px;
    out[5 + 2 * p] = pe;
  }
}

Eigen::VectorXd lift(double xi, double eta, const LiftConfig& cfg) {
  Eigen::VectorXd v(cfg.dim());
  lift_into(xi, eta, cfg, v.data());
  return v;
}

Eigen::MatrixXd lift_batch(const Eigen::Matrix2Xd& points, const LiftConfig& cfg) {
  Eigen::MatrixXd out(cfg.dim(), points.cols());
  for (long c = 0; c < points.cols(); ++c)
    lift_into(points(0, c), points(1, c), cfg, out.col(c).data());
  return out;
}

long MLPSpec::param_count() const {
  long n = 0;
  for (int l = 0; l + 1 < int(widths.size()); ++l)
    n += long(widths[l + 1]) * widths[l] + widths[l + 1];
  return n;
}

void MLPSpec::validate(const std::string& name) const {
  if (widths.size() < 3)
    throw ConfigError(name + " needs at least one hidden layer");
  for (int w : widths)
    if (w < 1) throw ConfigError(name + " has a layer of width < 1");
}

MLPSpec ModelSpec::branch_spec() const {
  MLPSpec s;
  s.widths.push_back(m);
  s.widths.insert(s.widths.end(), branch_hidden.begin(), branch_hidden.end());
  s.widths.push_back(k);
  return s;
}

MLPSpec ModelSpec::trunk_spec() const {
  MLPSpec s;
  s.widths.push_back(lift.dim());
  s.widths.insert(s.widths.end(), trunk_hidden.begin(), trunk_hidden.end());
  s.widths.push_back(k);
  return s;
}

long ModelSpec::param_count() const {
  return 2 * branch_spec().param_count() + trunk_spec().param_count() + 2;
}

void ModelSpec::validate() const {
  if (m < 1) throw ConfigError("model sensor count m must be >= 1");
  if (k < 1) throw ConfigError("latent width k must be >= 1");
  if (lift.q < 1) throw ConfigError("lift degree q must be >= 1");
  branch_spec().validate("branch network");
  trunk_spec().validate("trunk network");
}

long branch_x_offset(const ModelSpec&) { return 0; }
long branch_y_offset(const ModelSpec& spec) { return spec.branch_spec().param_count(); }
long trunk_offset(const ModelSpec& spec) { return 2 * spec.branch_spec().param_count(); }

MeshONetModel init_model(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  MeshONetModel model;
  model.spec = spec;
  model.seed = seed;
  model.theta = Eigen::VectorXd::Zero(spec.param_count());

  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };  // [0, 1)

  double* base = model.theta.data();
  for (const MLPSpec& net : {spec.branch_spec(), spec.branch_spec(), spec.trunk_spec()}) {
    for (int l = 0; l < net.layer_count(); ++l) {
      const long fan_in = net.widths[l];
      // LeCun uniform: U(-sqrt(3)/sqrt(fan_in), +sqrt(3)/sqrt(fan_in)),
      // variance exactly 1/fan_in so activation scale survives depth
      const double scale = std::sqrt(3.0) / std::sqrt(double(fan_in));
      const long n_w = long(net.widths[l + 1]) * net.widths[l];
      for (long i = 0; i < n_w; ++i) base[i] = (2.0 * unit() - 1.0) * scale;
      base += n_w + net.widths[l + 1];  // biases stay zero
    }
  }
  // the two output biases stay zero as well
  return model;
}

Eigen::Matrix2Xd forward(const MeshONetModel& model, const SensorTrace& trace,
                         const Eigen::Matrix2Xd& points) {
  const ModelSpec& spec = model.spec;
  if (trace.m != spec.m)
    throw ContractError("sensor trace length " + std::to_string(trace.m) +
                        " does not match model m = " + std::to_string(spec.m));
  if (model.theta.size() != spec.param_count())
    throw ContractError("model parameter vector does not match its spec");
  if (!model.theta.allFinite()) throw NumericError("model parameters contain non-finite values");

  const MLPSpec bs = spec.branch_spec(), ts = spec.trunk_spec();
  std::vector<Eigen::MatrixXd> acts;
  mlp_forward(bs, model.theta.data() + branch_x_offset(spec), trace_vector(trace.u1), acts,
              "branch_x");
  const Eigen::VectorXd bx = acts.back();
  mlp_forward(bs, model.theta.data() + branch_y_offset(spec), trace_vector(trace.u2), acts,
              "branch_y");
  const Eigen::VectorXd by = acts.back();

  // evaluate the trunk in chunks so activations stay cache-resident at large
  // point counts; chunking does not change any value
  constexpr long kChunk = 4096;
  Eigen::Matrix2Xd out(2, points.cols());
  for (long c0 = 0; c0 < points.cols(); c0 += kChunk) {
    const long nc = std::min(kChunk, points.cols() - c0);
    mlp_forward(ts, model.theta.data() + trunk_offset(spec),
                lift_batch(points.middleCols(c0, nc), spec.lift), acts, "trunk");
    const Eigen::MatrixXd& tout = acts.back();
    out.row(0).segment(c0, nc) = (bx.transpose() * tout).array() + model.bias_x();
    out.row(1).segment(c0, nc) = (by.transpose() * tout).array() + model.bias_y();
  }
  return out;
}

PhysMesh forward_mesh(const MeshONetModel& model, const SensorTrace& trace,
                      const CompGrid& grid) {
  Eigen::Matrix2Xd pts(2, long(grid.n_xi) * grid.n_eta);
  long c = 0;
  for (int j = 0; j < grid.n_eta; ++j)
    for (int i = 0; i < grid.n_xi; ++i, ++c) {
      pts(0, c) = grid.xi(i);
      pts(1, c) = grid.eta(j);
    }
  const Eigen::Matrix2Xd xy = forward(model, trace, pts);
  PhysMesh mesh(grid.n_xi, grid.n_eta, grid.topology);
  for (size_t p = 0; p < mesh.point_count(); ++p) {
    mesh.x[p] = xy(0, long(p));
    mesh.y[p] = xy(1, long(p));
  }
  return mesh;
}

namespace {

double accumulate_loss_grad(const MeshONetModel& model, const std::vector<TraceBatch>& batch,
                            double w_int, double w_bnd, Eigen::VectorXd* grad) {
  const ModelSpec& spec = model.spec;
  if (batch.empty()) throw ContractError("loss needs at least one trace batch");
  if (model.theta.size() != spec.param_count())
    throw ContractError("model parameter vector does not match its spec");
  const MLPSpec bs = spec.branch_spec(), ts = spec.trunk_spec();
  const double inv_traces = 1.0 / double(batch.size());

  double loss = 0.0;
  std::vector<Eigen::MatrixXd> bx_acts, by_acts, trunk_acts;
  for (const TraceBatch& tb : batch) {
    if (!tb.trace || !tb.points) throw ContractError("trace batch item is incomplete");
    if (tb.trace->m != spec.m)
      throw ContractError("sensor trace length does not match model m");
    const long n = long(tb.points->size());
    if (n == 0) continue;

    Eigen::Matrix2Xd pts(2, n);
    Eigen::Matrix2Xd tgt(2, n);
    Eigen::RowVectorXd w(n);
    for (long c = 0; c < n; ++c) {
      const TaggedPoint& p = (*tb.points)[size_t(c)];
      if (p.tag != PointTag::Interior && p.tag != PointTag::Boundary)
        throw ContractError("point " + std::to_string(c) + " has no interior/boundary tag");
      pts(0, c) = p.xi;
      pts(1, c) = p.eta;
      tgt(0, c) = p.tx;
      tgt(1, c) = p.ty;
      w(c) = p.tag == PointTag::Interior ? w_int : w_bnd;
    }

    mlp_forward(bs, model.theta.data() + branch_x_offset(spec), trace_vector(tb.trace->u1),
                bx_acts, "branch_x");
    mlp_forward(bs, model.theta.data() + branch_y_offset(spec), trace_vector(tb.trace->u2),
                by_acts, "branch_y");
    mlp_forward(ts, model.theta.data() + trunk_offset(spec), lift_batch(pts, spec.lift),
                trunk_acts, "trunk");
    const Eigen::VectorXd& bx = bx_acts.back();
    const Eigen::VectorXd& by = by_acts.back();
    const Eigen::MatrixXd& tout = trunk_acts.back();

    const Eigen::RowVectorXd rx =
        ((bx.transpose() * tout).array() + model.bias_x()) - tgt.row(0).array();
    const Eigen::RowVectorXd ry =
        ((by.transpose() * tout).array() + model.bias_y()) - tgt.row(1).array();
    loss += inv_traces * (w.array() * (rx.array().square() + ry.array().square())).sum();

    if (!grad) continue;
    const Eigen::RowVectorXd gx = 2.0 * inv_traces * w.array() * rx.array();
    const Eigen::RowVectorXd gy = 2.0 * inv_traces * w.array() * ry.array();

    double* gbase = grad->data();
    mlp_backward(bs, model.theta.data() + branch_x_offset(spec), bx_acts,
                 tout * gx.transpose(), gbase + branch_x_offset(spec));
    mlp_backward(bs, model.theta.data() + branch_y_offset(spec), by_acts,
                 tout * gy.transpose(), gbase + branch_y_offset(spec));
    Eigen::MatrixXd dTout;
    dTout.noalias() = bx * gx;
    dTout.noalias() += by * gy;
    mlp_backward(ts, model.theta.data() + trunk_offset(spec), trunk_acts, std::move(dTout),
                 gbase + trunk_offset(spec));
    (*grad)[grad->size() - 2] += gx.sum();
    (*grad)[grad->size() - 1] += gy.sum();
  }
  return loss;
}

}  // namespace

LossGrad loss_and_gradients(const MeshONetModel& model, const std::vector<TraceBatch>& batch,
                            double w_int, double w_bnd) {
  LossGrad lg;
  lg.grad = Eigen::VectorXd::Zero(model.theta.size());
  lg.loss = accumulate_loss_grad(model, batch, w_int, w_bnd, &lg.grad);
  return lg;
}

double loss_only(const MeshONetModel& model, const std::vector<TraceBatch>& batch, double w_int,
                 double w_bnd) {
  return accumulate_loss_grad(model, batch, w_int, w_bnd, nullptr);
}

}  // namespace meshonet
