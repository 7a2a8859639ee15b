#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "meshonet/checkpoint.hpp"
#include "meshonet/config.hpp"
#include "meshonet/dataset.hpp"
#include "meshonet/elliptic.hpp"
#include "meshonet/errors.hpp"
#include "meshonet/quality.hpp"
#include "meshonet/tfi.hpp"
#include "meshonet/timing.hpp"
#include "meshonet/train.hpp"

namespace fs = std::filesystem;
using namespace meshonet;

namespace {

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string csv_path;
};

void print_quality(const QualityReport& rep, bool with_histogram = true) {
  std::printf("cells               %ld\n", rep.cell_count);
  std::printf("mean max angle      %.3f deg\n", rep.mean_max_angle);
  std::printf("worst max angle     %.3f deg\n", rep.worst_angle);
  std::printf("inverted cells      %ld\n", rep.inverted_cells);
  std::printf("degenerate cells    %ld\n", rep.degenerate_cells);
  if (std::isfinite(rep.boundary_deviation))
    std::printf("boundary deviation  %.3e\n", rep.boundary_deviation);
  if (!with_histogram) return;
  std::printf("max-angle histogram (5 deg bins):\n");
  for (int b = 0; b < 18; ++b)
    if (rep.histogram[b] > 0)
      std::printf("  [%3d,%3d%c %ld\n", 90 + 5 * b, 95 + 5 * b, b == 17 ? ']' : ')',
                  rep.histogram[b]);
}

void write_quality_csv(const QualityReport& rep, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "cells,mean_max_angle,worst_angle,inverted_cells,degenerate_cells,"
                  "boundary_deviation");
  for (int b = 0; b < 18; ++b) std::fprintf(f, ",bin_%d_%d", 90 + 5 * b, 95 + 5 * b);
  std::fprintf(f, "\n%ld,%.17g,%.17g,%ld,%ld,%.17g", rep.cell_count, rep.mean_max_angle,
               rep.worst_angle, rep.inverted_cells, rep.degenerate_cells,
               rep.boundary_deviation);
  for (int b = 0; b < 18; ++b) std::fprintf(f, ",%ld", rep.histogram[b]);
  std::fprintf(f, "\n");
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

void write_convergence_csv(const std::vector<double>& log, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "sweep,max_update\n");
  for (size_t i = 0; i < log.size(); ++i) std::fprintf(f, "%zu,%.17g\n", i + 1, log[i]);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

SensorTrace trace_for_checkpoint(const Checkpoint& ck, const std::string& family, double param) {
  const GeometryCase geom = make_case(family, param);
  if (geom.topology != ck.meta.topology)
    throw ConfigError("checkpoint was trained on " + to_string(ck.meta.topology) +
                      "-topology geometry but family '" + family + "' is " +
                      to_string(geom.topology) + "-topology");
  if (int(ck.meta.layout.size()) != ck.model.spec.m)
    throw ConfigError("checkpoint sensor layout does not match its model spec");
  return sample_sensors(geom, ck.model.spec.m, ck.meta.layout);
}

// --- subcommand implementations --------------------------------------------

int cmd_geometry(const std::string& family, double param, int points, const std::string& out) {
  const GeometryCase geom = make_case(family, param);
  std::FILE* f = out.empty() ? stdout : std::fopen(out.c_str(), "w");
  if (!f) throw IoError("cannot open '" + out + "' for writing");
  for (size_t c = 0; c < geom.curves.size(); ++c) {
    std::fprintf(f, "# curve %zu\n", c);
    for (int j = 0; j < points; ++j) {
      const double t = double(j) / (points - 1);
      const Point2 p = geom.curves[c](t);
      std::fprintf(f, "%.17g %.17g %.17g\n", t, p.x, p.y);
    }
    std::fprintf(f, "\n");
  }
  if (!out.empty() && std::fclose(f) != 0) throw IoError("write failed for '" + out + "'");
  return exit_ok;
}

int cmd_generate(const std::string& family, double param, const std::string& method, int n_xi,
                 int n_eta, const std::string& out, const std::string& checkpoint_path,
                 const SolverConfig& solver, const std::string& log_path,
                 const std::string& csv_path) {
  const GeometryCase geom = make_case(family, param);
  const CompGrid grid(n_xi, n_eta, geom.topology);

  PhysMesh mesh;
  bool converged = true;
  double seconds = 0.0;
  if (method == "tfi") {
    seconds = time_once([&] { mesh = tfi_generate(geom, grid); });
  } else if (method == "elliptic") {
    SolveResult res;
    seconds = time_once([&] { res = elliptic_solve(geom, grid, solver); });
    converged = res.converged;
    std::printf("elliptic sweeps     %ld (%s)\n", res.iterations,
                res.converged ? "converged" : "max_iters reached");
    if (!log_path.empty()) write_convergence_csv(res.update_log, log_path);
    mesh = std::move(res.mesh);
  } else if (method == "model") {
    if (checkpoint_path.empty())
      throw ConfigError("--method model requires --checkpoint");
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    const SensorTrace trace = trace_for_checkpoint(ck, family, param);
    seconds = time_once([&] { mesh = forward_mesh(ck.model, trace, grid); });
  } else {
    throw ConfigError("unknown method '" + method + "' (expected tfi, elliptic, or model)");
  }

  if (!out.empty()) write_mesh(mesh, out);
  const QualityReport rep = assess(mesh, &geom);
  print_quality(rep);
  std::printf("wall time           %.6f s\n", seconds);
  if (!csv_path.empty()) write_quality_csv(rep, csv_path);
  if (!converged) return exit_nonconverged;
  return rep.inverted_cells == 0 ? exit_ok : exit_invalid_mesh;
}

int cmd_dataset(const std::string& family, const std::vector<double>& params, int n_xi, int n_eta,
                int sensors, const SolverConfig& solver, int jobs, const std::string& out_dir) {
  const Dataset ds = build_dataset(family, params, n_xi, n_eta, sensors, solver, jobs);
  write_dataset(ds, out_dir);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)ds.config_hash());
  std::printf("wrote %zu samples to %s (config hash %s)\n", ds.samples.size(), out_dir.c_str(),
              hash);
  return exit_ok;
}

int run_training(const ExperimentConfig& cfg, const Dataset& ds, const std::string& ck_path,
                 const std::string& history_path) {
  MeshONetModel model = init_model(cfg.model_spec(), cfg.seed);
  std::printf("model parameters    %ld\n", model.spec.param_count());

  TrainResult result;
  try {
    result = train(std::move(model), ds, cfg.split(), cfg.train_config());
  } catch (const TrainingAborted& e) {
    if (!ck_path.empty()) {
      MeshONetModel rescue;
      rescue.spec = cfg.model_spec();
      rescue.seed = cfg.seed;
      rescue.theta = e.last_good_theta;
      CheckpointMeta meta{cfg.family, ds.topology, ds.layout, cfg.train_params,
                          std::uint64_t(e.iteration), std::nan("")};
      save_checkpoint(ck_path + ".last_good", rescue, meta);
      std::fprintf(stderr, "saved last good parameters to %s.last_good\n", ck_path.c_str());
    }
    throw;
  }

  if (!history_path.empty()) write_history_csv(result.history, history_path);
  const double final_loss = result.history.empty() ? 0.0 : result.history.back().loss;
  if (!ck_path.empty()) {
    CheckpointMeta meta{cfg.family, ds.topology, ds.layout, cfg.train_params,
                        std::uint64_t(cfg.iterations), final_loss};
    save_checkpoint(ck_path, result.model, meta);
  }
  std::printf("final training loss %.6e\n", final_loss);
  return exit_ok;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& manifest, const std::string& ck_path,
              const std::string& history_path) {
  const Dataset ds = read_dataset(manifest);
  if (ds.family != cfg.family)
    throw ConfigError("dataset family '" + ds.family + "' does not match config family '" +
                      cfg.family + "'");
  if (ds.n_xi != cfg.n_xi || ds.n_eta != cfg.n_eta)
    throw ConfigError("dataset resolution does not match config resolution");
  if (int(ds.layout.size()) != cfg.sensors)
    throw ConfigError("dataset sensor count does not match config sensors");
  return run_training(cfg, ds, ck_path, history_path);
}

int cmd_infer(const std::string& checkpoint_path, const std::string& family, double param,
              int n_xi, int n_eta, const std::string& out) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const SensorTrace trace = trace_for_checkpoint(ck, family, param);
  const GeometryCase geom = make_case(family, param);
  const CompGrid grid(n_xi, n_eta, geom.topology);
  PhysMesh mesh;
  const double seconds = time_once([&] { mesh = forward_mesh(ck.model, trace, grid); });
  if (!out.empty()) write_mesh(mesh, out);
  const QualityReport rep = assess(mesh, &geom);
  print_quality(rep);
  std::printf("wall time           %.6f s\n", seconds);
  return rep.inverted_cells == 0 ? exit_ok : exit_invalid_mesh;
}

int cmd_refine(const std::string& checkpoint_path, const std::string& family, double param,
               const std::vector<int>& resolutions, double cutoff_seconds,
               const SolverConfig& solver, const std::string& csv_path) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const SensorTrace trace = trace_for_checkpoint(ck, family, param);
  const GeometryCase geom = make_case(family, param);

  std::FILE* csv = nullptr;
  if (!csv_path.empty()) {
    csv = std::fopen(csv_path.c_str(), "w");
    if (!csv) throw IoError("cannot open '" + csv_path + "' for writing");
    std::fprintf(csv, "resolution,points,model_seconds,tfi_seconds,elliptic_seconds,"
                      "model_inverted,tfi_inverted,elliptic_inverted\n");
  }
  std::printf("%10s %10s %14s %14s %16s %8s\n", "resolution", "points", "model_s", "tfi_s",
              "elliptic_s", "inv");

  double last_elliptic = -1.0;
  int last_n = 0;
  for (int n : resolutions) {
    const CompGrid grid(n, n, geom.topology);
    PhysMesh model_mesh, tfi_mesh;
    const double t_model = median_time([&] { model_mesh = forward_mesh(ck.model, trace, grid); });
    const double t_tfi = median_time([&] { tfi_mesh = tfi_generate(geom, grid); });
    const long inv_model = count_inverted(model_mesh);
    const long inv_tfi = count_inverted(tfi_mesh);

    // skip the PDE baseline once its predicted cost exceeds the cutoff
    bool run_elliptic = true;
    if (last_elliptic > 0.0) {
      const double ratio = double(n) / last_n;
      if (last_elliptic * ratio * ratio * ratio * ratio > cutoff_seconds) run_elliptic = false;
    }
    double t_ell = -1.0;
    long inv_ell = -1;
    if (run_elliptic) {
      SolveResult res;
      t_ell = median_time([&] { res = elliptic_solve(geom, grid, solver); });
      inv_ell = count_inverted(res.mesh);
      last_elliptic = t_ell;
      last_n = n;
    }

    char ell_s[32] = "-", ell_i[32] = "-";
    if (run_elliptic) {
      std::snprintf(ell_s, sizeof ell_s, "%.6f", t_ell);
      std::snprintf(ell_i, sizeof ell_i, "%ld", inv_ell);
    }
    std::printf("%7dx%-3d %10ld %14.6f %14.6f %16s %8ld\n", n, n, long(n) * n, t_model, t_tfi,
                ell_s, inv_model);
    if (csv)
      std::fprintf(csv, "%dx%d,%ld,%.6f,%.6f,%s,%ld,%ld,%s\n", n, n, long(n) * n, t_model, t_tfi,
                   ell_s, inv_model, inv_tfi, ell_i);
  }
  if (csv && std::fclose(csv) != 0) throw IoError("write failed for '" + csv_path + "'");
  return exit_ok;
}

int cmd_quality(const std::string& mesh_path, const std::string& family,
                std::optional<double> param, const std::string& csv_path) {
  const PhysMesh mesh = read_mesh(mesh_path);
  QualityReport rep;
  if (!family.empty() && param) {
    const GeometryCase geom = make_case(family, *param);
    rep = assess(mesh, &geom);
  } else {
    rep = assess(mesh);
  }
  print_quality(rep);
  if (!csv_path.empty()) write_quality_csv(rep, csv_path);
  return rep.inverted_cells == 0 ? exit_ok : exit_invalid_mesh;
}

int cmd_bench(const std::string& family, double param, int n_xi, int n_eta,
              const std::string& checkpoint_path, const SolverConfig& solver,
              const std::string& csv_path) {
  const GeometryCase geom = make_case(family, param);
  const CompGrid grid(n_xi, n_eta, geom.topology);

  struct Row {
    std::string method;
    double seconds;
    long inverted;
  };
  std::vector<Row> rows;

  PhysMesh mesh;
  rows.push_back({"tfi", median_time([&] { mesh = tfi_generate(geom, grid); }),
                  count_inverted(mesh)});
  SolveResult res;
  rows.push_back({"elliptic", median_time([&] { res = elliptic_solve(geom, grid, solver); }),
                  count_inverted(res.mesh)});
  if (!checkpoint_path.empty()) {
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    const SensorTrace trace = trace_for_checkpoint(ck, family, param);
    rows.push_back({"model", median_time([&] { mesh = forward_mesh(ck.model, trace, grid); }),
                    count_inverted(mesh)});
  }

  std::printf("%-10s %14s %10s\n", "method", "seconds", "inverted");
  for (const Row& r : rows) std::printf("%-10s %14.6f %10ld\n", r.method.c_str(), r.seconds,
                                        r.inverted);
  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (!f) throw IoError("cannot open '" + csv_path + "' for writing");
    std::fprintf(f, "method,seconds,inverted\n");
    for (const Row& r : rows) std::fprintf(f, "%s,%.6f,%ld\n", r.method.c_str(), r.seconds,
                                           r.inverted);
    if (std::fclose(f) != 0) throw IoError("write failed for '" + csv_path + "'");
  }
  return exit_ok;
}

// rethrow preserving the exception type so the exit-code mapping survives
[[noreturn]] void fail_stage(const std::string& stage) {
  const std::string prefix = "stage '" + stage + "' failed: ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const ContractError& e) {
    throw ContractError(prefix + e.what());
  } catch (const DomainParamError& e) {
    throw DomainParamError(prefix + e.what());
  } catch (const GeometryError& e) {
    throw GeometryError(prefix + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
  std::string stage = "config";
  try {
    cfg.validate();
    fs::create_directories(out_dir);

    stage = "dataset";
    std::vector<double> all_params = cfg.train_params;
    for (double p : cfg.test_params)
      if (std::find(all_params.begin(), all_params.end(), p) == all_params.end())
        all_params.push_back(p);
    const Dataset ds =
        build_dataset(cfg.family, all_params, cfg.n_xi, cfg.n_eta, cfg.sensors, cfg.solver(), jobs);
    write_dataset(ds, (fs::path(out_dir) / "dataset").string());
    std::printf("[dataset] %zu samples built\n", ds.samples.size());

    stage = "train";
    const std::string ck_path = (fs::path(out_dir) / "checkpoint.bin").string();
    const std::string hist_path = (fs::path(out_dir) / "loss_history.csv").string();
    run_training(cfg, ds, ck_path, hist_path);

    stage = "evaluate";
    const Checkpoint ck = load_checkpoint(ck_path);
    const std::vector<EvalRow> rows = evaluate(ck.model, ds, cfg.test_params);
    write_eval_csv(rows, (fs::path(out_dir) / "evaluation.csv").string());
    write_timings_csv(rows, (fs::path(out_dir) / "timings.csv").string());
    const CompGrid grid(cfg.n_xi, cfg.n_eta, ds.topology);
    for (double p : cfg.test_params) {
      char name[64];
      std::snprintf(name, sizeof name, "mesh_param_%g.txt", p);
      write_mesh(forward_mesh(ck.model, ds.find(p)->trace, grid),
                 (fs::path(out_dir) / name).string());
    }
    for (const EvalRow& r : rows)
      std::printf("[evaluate] param %g: rel_l2 %.3e, inverted %ld, boundary dev %.3e\n", r.param,
                  r.rel_l2, r.quality.inverted_cells, r.quality.boundary_deviation);

    stage = "refine";
    cmd_refine(ck_path, cfg.family, cfg.test_params.front(), cfg.refine_resolutions,
               cfg.elliptic_cutoff_seconds, cfg.solver(),
               (fs::path(out_dir) / "refine.csv").string());
    return exit_ok;
  } catch (...) {
    fail_stage(stage);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured mesh generation: TFI and Winslow baselines plus a trainable "
               "branch-trunk mesh operator"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "override the experiment seed");
  app.add_option("--config", global.config_path, "experiment config file");
  app.add_option("--csv", global.csv_path, "write CSV output to this path");

  // geometry
  auto* sc_geom = app.add_subcommand("geometry", "dump sampled boundary curves as 't x y' lines");
  std::string family = "arch", out, method = "tfi", checkpoint, mesh_path, manifest, log_path;
  double param = 0.0;
  int points = 64, jobs = 1;
  std::string resolution = "33x33";
  std::vector<double> params_list;
  std::vector<int> resolutions{33, 65, 129, 257, 513};
  SolverConfig solver;
  double cutoff = 600.0;
  std::optional<double> opt_param;

  sc_geom->add_option("--family", family, "geometry family")->required();
  sc_geom->add_option("--param", param, "family parameter")->required();
  sc_geom->add_option("--points", points, "samples per curve");
  sc_geom->add_option("-o,--out", out, "output file (default stdout)");

  // generate
  auto* sc_gen = app.add_subcommand("generate", "generate one mesh and report its quality");
  sc_gen->add_option("--family", family)->required();
  sc_gen->add_option("--param", param)->required();
  sc_gen->add_option("--method", method, "tfi | elliptic | model");
  sc_gen->add_option("--resolution", resolution, "e.g. 33x33");
  sc_gen->add_option("-o,--out", out, "mesh output path");
  sc_gen->add_option("--checkpoint", checkpoint, "trained model checkpoint");
  sc_gen->add_option("--omega", solver.omega, "SOR relaxation factor");
  sc_gen->add_option("--tol", solver.tol, "convergence tolerance");
  sc_gen->add_option("--max-iters", solver.max_iters, "sweep limit (0 = auto)");
  sc_gen->add_option("--log", log_path, "write elliptic convergence CSV here");

  // dataset
  auto* sc_data = app.add_subcommand("dataset", "build a training dataset of elliptic meshes");
  sc_data->add_option("--family", family)->required();
  sc_data->add_option("--params", params_list, "comma-separated family parameters")
      ->required()
      ->delimiter(',');
  sc_data->add_option("--resolution", resolution);
  int sensors = 128;
  sc_data->add_option("--sensors", sensors, "sensor count");
  sc_data->add_option("--omega", solver.omega);
  sc_data->add_option("--tol", solver.tol);
  sc_data->add_option("--max-iters", solver.max_iters);
  sc_data->add_option("--jobs", jobs, "parallel solves");
  sc_data->add_option("-o,--out", out, "output directory")->required();

  // train
  auto* sc_train = app.add_subcommand("train", "train a model per the config on a dataset");
  sc_train->add_option("--dataset", manifest, "dataset manifest path")->required();
  std::string history_path;
  sc_train->add_option("--out", checkpoint, "checkpoint output path");
  sc_train->add_option("--history", history_path, "loss history CSV path");

  // infer
  auto* sc_infer = app.add_subcommand("infer", "generate a mesh from a trained checkpoint");
  sc_infer->add_option("--checkpoint", checkpoint)->required();
  sc_infer->add_option("--family", family)->required();
  sc_infer->add_option("--param", param)->required();
  sc_infer->add_option("--resolution", resolution);
  sc_infer->add_option("-o,--out", out, "mesh output path");

  // refine
  auto* sc_refine = app.add_subcommand("refine",
                                       "time model/TFI/elliptic generation across resolutions");
  sc_refine->add_option("--checkpoint", checkpoint)->required();
  sc_refine->add_option("--family", family)->required();
  sc_refine->add_option("--param", param)->required();
  sc_refine->add_option("--resolutions", resolutions, "comma-separated square sizes")
      ->delimiter(',');
  sc_refine->add_option("--cutoff", cutoff, "skip elliptic when predicted above this (s)");
  sc_refine->add_option("--omega", solver.omega);
  sc_refine->add_option("--tol", solver.tol);
  sc_refine->add_option("--max-iters", solver.max_iters);

  // quality
  auto* sc_quality = app.add_subcommand("quality", "report quality metrics of a mesh file");
  sc_quality->add_option("--mesh", mesh_path, "mesh file")->required();
  sc_quality->add_option("--family", family);
  sc_quality->add_option("--param", opt_param, "family parameter (enables boundary deviation)");

  // run
  auto* sc_run = app.add_subcommand("run", "end-to-end: dataset, train, evaluate, refine");
  sc_run->add_option("--out", out, "artifacts directory")->required();
  sc_run->add_option("--jobs", jobs, "dataset build parallelism");

  // bench
  auto* sc_bench = app.add_subcommand("bench", "compare generation times at one resolution");
  sc_bench->add_option("--family", family)->required();
  sc_bench->add_option("--param", param)->required();
  sc_bench->add_option("--resolution", resolution);
  sc_bench->add_option("--checkpoint", checkpoint, "include the model in the comparison");
  sc_bench->add_option("--omega", solver.omega);
  sc_bench->add_option("--tol", solver.tol);
  sc_bench->add_option("--max-iters", solver.max_iters);

  CLI11_PARSE(app, argc, argv);

  try {
    int n_xi = 33, n_eta = 33;
    {
      const auto x = resolution.find('x');
      if (x == std::string::npos)
        throw ConfigError("resolution must look like '33x33', got '" + resolution + "'");
      try {
        n_xi = std::stoi(resolution.substr(0, x));
        n_eta = std::stoi(resolution.substr(x + 1));
      } catch (const std::exception&) {
        throw ConfigError("resolution must look like '33x33', got '" + resolution + "'");
      }
    }

    auto load_cfg = [&]() {
      if (global.config_path.empty())
        throw ConfigError("this subcommand needs --config <file>");
      ExperimentConfig cfg = load_config(global.config_path);
      if (global.seed) cfg.seed = *global.seed;
      cfg.validate();
      return cfg;
    };

    if (sc_geom->parsed()) return cmd_geometry(family, param, points, out);
    if (sc_gen->parsed())
      return cmd_generate(family, param, method, n_xi, n_eta, out, checkpoint, solver, log_path,
                          global.csv_path);
    if (sc_data->parsed())
      return cmd_dataset(family, params_list, n_xi, n_eta, sensors, solver, jobs, out);
    if (sc_train->parsed()) return cmd_train(load_cfg(), manifest, checkpoint, history_path);
    if (sc_infer->parsed()) return cmd_infer(checkpoint, family, param, n_xi, n_eta, out);
    if (sc_refine->parsed())
      return cmd_refine(checkpoint, family, param, resolutions, cutoff, solver, global.csv_path);
    if (sc_quality->parsed()) return cmd_quality(mesh_path, family, opt_param, global.csv_path);
    if (sc_run->parsed()) return cmd_run(load_cfg(), out, jobs);
    if (sc_bench->parsed())
      return cmd_bench(family, param, n_xi, n_eta, checkpoint, solver, global.csv_path);
    return exit_config;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_config;
  } catch (const DomainParamError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return exit_domain;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return exit_domain;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return exit_nonconverged;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return exit_numeric;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return exit_io;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 9;  // unexpected internal failure
  }
}
