#include "meshonet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "meshonet/errors.hpp"

namespace meshonet {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Interpolation: return "interpolation";
    case Protocol::Extrapolation: return "extrapolation";
    case Protocol::LeaveOneOut: return "leave-one-out";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "interpolation") return Protocol::Interpolation;
  if (s == "extrapolation") return Protocol::Extrapolation;
  if (s == "leave-one-out") return Protocol::LeaveOneOut;
  throw ConfigError("unknown split protocol '" + s + "'");
}

void validate_split(const Split& split) {
  if (split.train_params.empty()) throw ConfigError("split has no training parameters");
  if (split.test_params.empty()) throw ConfigError("split has no test parameters");
  for (double t : split.test_params)
    for (double p : split.train_params)
      if (t == p)
        throw ConfigError("test parameter " + std::to_string(t) + " also appears in the train set");
  const auto [lo_it, hi_it] =
      std::minmax_element(split.train_params.begin(), split.train_params.end());
  const double lo = *lo_it, hi = *hi_it;
  for (double t : split.test_params) {
    if (split.protocol == Protocol::Interpolation && !(t > lo && t < hi))
      throw ConfigError("interpolation test parameter " + std::to_string(t) +
                        " is not strictly inside the train range");
    if (split.protocol == Protocol::Extrapolation && !(t < lo || t > hi))
      throw ConfigError("extrapolation test parameter " + std::to_string(t) +
                        " is not strictly outside the train range");
  }
}

double TrainConfig::lr_at(long iteration) const {
  if (lr_decay_every <= 0 || lr_decay == 1.0) return lr;
  const long past_hold = iteration - 1 - lr_hold;
  if (past_hold < 0) return lr;
  return lr * std::pow(lr_decay, double(past_hold / lr_decay_every));
}

std::vector<TaggedPoint> lattice_points(const Dataset& ds, const Sample& sample) {
  const CompGrid grid(ds.n_xi, ds.n_eta, ds.topology);
  const PhysMesh& t = sample.target;
  std::vector<TaggedPoint> pts;
  pts.reserve(t.point_count());
  for (int j = 0; j < ds.n_eta; ++j)
    for (int i = 0; i < ds.n_xi; ++i) {
      const bool bnd = j == 0 || j == ds.n_eta - 1 ||
                       (ds.topology == Topology::H && (i == 0 || i == ds.n_xi - 1));
      pts.push_back({grid.xi(i), grid.eta(j), bnd ? PointTag::Boundary : PointTag::Interior,
                     t.xat(i, j), t.yat(i, j)});
    }
  return pts;
}

namespace {

struct SamplePoints {
  const SensorTrace* trace = nullptr;
  std::vector<TaggedPoint> boundary;
  std::vector<TaggedPoint> interior;  // full interior lattice, targets attached
  std::vector<int> order;             // permutation buffer for subset draws
};

SamplePoints split_points(const Dataset& ds, const Sample& sample) {
  SamplePoints sp;
  sp.trace = &sample.trace;
  for (TaggedPoint& p : lattice_points(ds, sample)) {
    if (p.tag == PointTag::Boundary)
      sp.boundary.push_back(p);
    else
      sp.interior.push_back(p);
  }
  sp.order.resize(sp.interior.size());
  for (size_t i = 0; i < sp.order.size(); ++i) sp.order[i] = int(i);
  return sp;
}

}  // namespace

TrainResult train(MeshONetModel model, const Dataset& ds, const Split& split,
                  const TrainConfig& cfg) {
  validate_split(split);
  if (model.spec.m != int(ds.layout.size()))
    throw ContractError("model m = " + std::to_string(model.spec.m) +
                        " does not match dataset sensor count " +
                        std::to_string(ds.layout.size()));
  if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (cfg.interior_batch < 1) throw ConfigError("interior batch must be >= 1");

  std::vector<SamplePoints> train_data;
  for (double p : split.train_params) {
    const Sample* s = ds.find(p);
    if (!s) throw ConfigError("train parameter " + std::to_string(p) + " is not in the dataset");
    train_data.push_back(split_points(ds, *s));
    if (cfg.interior_batch > int(train_data.back().interior.size()))
      throw ConfigError("interior batch " + std::to_string(cfg.interior_batch) +
                        " exceeds the interior point count " +
                        std::to_string(train_data.back().interior.size()));
  }

  TrainResult out;
  std::mt19937_64 rng(cfg.seed);
  AdamState adam(model.theta.size());
  AdamConfig adam_cfg = cfg.adam;

  // per-trace working buffers: boundary points stay put, interior slots are
  // refilled from the fresh subset each iteration
  std::vector<std::vector<TaggedPoint>> buffers(train_data.size());
  std::vector<TraceBatch> batch(train_data.size());
  for (size_t s = 0; s < train_data.size(); ++s) {
    buffers[s] = train_data[s].boundary;
    buffers[s].resize(train_data[s].boundary.size() + size_t(cfg.interior_batch));
    batch[s] = {train_data[s].trace, &buffers[s]};
  }

  Eigen::VectorXd last_good = model.theta;
  for (long it = 1; it <= cfg.iterations; ++it) {
    for (size_t s = 0; s < train_data.size(); ++s) {
      SamplePoints& sp = train_data[s];
      const size_t n = sp.order.size();
      const size_t base = sp.boundary.size();
      for (int d = 0; d < cfg.interior_batch; ++d) {
        const size_t r = size_t(d) + size_t(rng() % (n - size_t(d)));
        std::swap(sp.order[size_t(d)], sp.order[r]);
        buffers[s][base + size_t(d)] = sp.interior[size_t(sp.order[size_t(d)])];
      }
    }

    LossGrad lg = loss_and_gradients(model, batch, cfg.w_int, cfg.w_bnd);
    if (!std::isfinite(lg.loss)) throw TrainingAborted(it, std::move(last_good));

    adam_cfg.lr = cfg.lr_at(it);
    adam_step(model.theta, lg.grad, adam, adam_cfg);

    if (it == 1 || it == cfg.iterations || (cfg.eval_interval > 0 && it % cfg.eval_interval == 0)) {
      out.history.push_back({it, lg.loss, adam_cfg.lr});
      last_good = model.theta;
    }
  }
  out.model = std::move(model);
  return out;
}

double relative_l2(const PhysMesh& pred, const PhysMesh& ref) {
  if (pred.n_xi != ref.n_xi || pred.n_eta != ref.n_eta)
    throw ContractError("relative_l2: mesh dimensions disagree");
  double num = 0.0, den = 0.0;
  for (size_t q = 0; q < pred.point_count(); ++q) {
    const double dx = pred.x[q] - ref.x[q];
    const double dy = pred.y[q] - ref.y[q];
    num += dx * dx + dy * dy;
    den += ref.x[q] * ref.x[q] + ref.y[q] * ref.y[q];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

std::vector<EvalRow> evaluate(const MeshONetModel& model, const Dataset& ds,
                              const std::vector<double>& params) {
  const CompGrid grid(ds.n_xi, ds.n_eta, ds.topology);
  std::vector<EvalRow> rows;
  for (double p : params) {
    const Sample* s = ds.find(p);
    if (!s) throw ConfigError("parameter " + std::to_string(p) + " is not in the dataset");
    EvalRow row;
    row.param = p;
    const auto t0 = std::chrono::steady_clock::now();
    const PhysMesh pred = forward_mesh(model, s->trace, grid);
    row.forward_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.rel_l2 = relative_l2(pred, s->target);
    const GeometryCase geom = make_case(ds.family, p);
    row.quality = assess(pred, &geom);
    rows.push_back(std::move(row));
  }
  return rows;
}

double full_grid_loss(const MeshONetModel& model, const Dataset& ds, const Sample& sample,
                      double w_int, double w_bnd) {
  const std::vector<TaggedPoint> pts = lattice_points(ds, sample);
  const std::vector<TraceBatch> batch{{&sample.trace, &pts}};
  return loss_only(model, batch, w_int, w_bnd);
}

void write_history_csv(const std::vector<LossRecord>& history, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "iteration,loss,lr\n");
  for (const LossRecord& r : history)
    std::fprintf(f, "%ld,%.17g,%.17g\n", r.iteration, r.loss, r.lr);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

void write_eval_csv(const std::vector<EvalRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f,
               "param,rel_l2,mean_max_angle,worst_angle,inverted_cells,degenerate_cells,"
               "boundary_deviation\n");
  for (const EvalRow& r : rows)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%ld,%ld,%.17g\n", r.param, r.rel_l2,
                 r.quality.mean_max_angle, r.quality.worst_angle, r.quality.inverted_cells,
                 r.quality.degenerate_cells, r.quality.boundary_deviation);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

void write_timings_csv(const std::vector<EvalRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "param,forward_seconds\n");
  for (const EvalRow& r : rows) std::fprintf(f, "%.17g,%.6f\n", r.param, r.forward_seconds);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

}  // namespace meshonet
