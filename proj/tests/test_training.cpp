#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "meshonet/config.hpp"
#include "meshonet/dataset.hpp"
#include "meshonet/errors.hpp"
#include "meshonet/train.hpp"

using namespace meshonet;
namespace fs = std::filesystem;

namespace {

bool bits_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * size_t(a.size())) == 0;
}

ModelSpec tiny_spec(int m) {
  ModelSpec s;
  s.m = m;
  s.k = 8;
  s.lift.q = 2;
  s.branch_hidden = {12, 10};
  s.trunk_hidden = {12, 10};
  return s;
}

Dataset tiny_dataset() {
  SolverConfig solver;
  return build_dataset("arch", {0.2, 0.8, 0.5}, 9, 9, 16, solver, 1);
}

TrainConfig tiny_config(long iters) {
  TrainConfig tc;
  tc.iterations = iters;
  tc.interior_batch = 20;
  tc.lr = 1e-3;
  tc.seed = 42;
  tc.eval_interval = 10;
  return tc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dataset build") {
  SUBCASE("arch params produce valid samples") {
    SolverConfig solver;
    const Dataset ds = build_dataset("arch", {0.1, 0.5, 0.9}, 17, 17, 32, solver, 2);
    REQUIRE(ds.samples.size() == 3);
    for (const Sample& s : ds.samples) {
      CHECK(s.trace.m == 32);
      CHECK(s.target.n_xi == 17);
      CHECK(count_inverted(s.target) == 0);
      const GeometryCase geom = make_case("arch", s.param);
      CHECK(boundary_deviation(s.target, geom) == 0.0);
    }
    CHECK(ds.find(0.5) != nullptr);
    CHECK(ds.find(0.3) == nullptr);
  }
  SUBCASE("empty parameter list gives an empty dataset with a valid manifest") {
    SolverConfig solver;
    const Dataset ds = build_dataset("arch", {}, 9, 9, 16, solver, 1);
    CHECK(ds.samples.empty());
    const std::string dir = (fs::temp_directory_path() / "empty_ds").string();
    write_dataset(ds, dir);
    const Dataset back = read_dataset(dir + "/manifest.txt");
    CHECK(back.samples.empty());
    CHECK(back.config_hash() == ds.config_hash());
  }
  SUBCASE("round trip through the manifest is exact") {
    const Dataset ds = tiny_dataset();
    const std::string dir = (fs::temp_directory_path() / "tiny_ds").string();
    write_dataset(ds, dir);
    const Dataset back = read_dataset(dir + "/manifest.txt");
    REQUIRE(back.samples.size() == ds.samples.size());
    CHECK(back.family == ds.family);
    CHECK(back.config_hash() == ds.config_hash());
    for (size_t i = 0; i < ds.samples.size(); ++i) {
      CHECK(back.samples[i].param == ds.samples[i].param);
      CHECK(back.samples[i].trace.u1 == ds.samples[i].trace.u1);
      CHECK(back.samples[i].trace.u2 == ds.samples[i].trace.u2);
      CHECK(back.samples[i].target.x == ds.samples[i].target.x);
      CHECK(back.samples[i].target.y == ds.samples[i].target.y);
    }
  }
  SUBCASE("identical builds produce identical manifests") {
    const std::string d1 = (fs::temp_directory_path() / "ds_a").string();
    const std::string d2 = (fs::temp_directory_path() / "ds_b").string();
    write_dataset(tiny_dataset(), d1);
    write_dataset(tiny_dataset(), d2);
    CHECK(read_file(d1 + "/manifest.txt") == read_file(d2 + "/manifest.txt"));
  }
  SUBCASE("parallel build equals serial build") {
    SolverConfig solver;
    const Dataset a = build_dataset("arch", {0.2, 0.4, 0.6, 0.8}, 9, 9, 16, solver, 1);
    const Dataset b = build_dataset("arch", {0.2, 0.4, 0.6, 0.8}, 9, 9, 16, solver, 4);
    for (size_t i = 0; i < a.samples.size(); ++i)
      CHECK(a.samples[i].target.x == b.samples[i].target.x);
  }
  SUBCASE("non-convergence fails the build loudly") {
    SolverConfig solver;
    solver.max_iters = 2;
    CHECK_THROWS_AS(build_dataset("arch", {0.5}, 17, 17, 16, solver, 1), ConvergenceError);
  }
}

TEST_CASE("split validation") {
  SUBCASE("overlap rejected") {
    CHECK_THROWS_AS(validate_split({Protocol::Interpolation, {0.1, 0.9}, {0.9}}), ConfigError);
    CHECK_THROWS_AS(validate_split({Protocol::LeaveOneOut, {0.1, 0.5}, {0.5}}), ConfigError);
  }
  SUBCASE("interpolation must test strictly inside") {
    CHECK_NOTHROW(validate_split({Protocol::Interpolation, {0.1, 0.9}, {0.5}}));
    CHECK_THROWS_AS(validate_split({Protocol::Interpolation, {0.1, 0.9}, {0.95}}), ConfigError);
  }
  SUBCASE("extrapolation must test strictly outside") {
    CHECK_NOTHROW(validate_split({Protocol::Extrapolation, {0.1, 0.3}, {0.7}}));
    CHECK_THROWS_AS(validate_split({Protocol::Extrapolation, {0.1, 0.3}, {0.2}}), ConfigError);
  }
  SUBCASE("empty sides rejected") {
    CHECK_THROWS_AS(validate_split({Protocol::Interpolation, {}, {0.5}}), ConfigError);
    CHECK_THROWS_AS(validate_split({Protocol::Interpolation, {0.1}, {}}), ConfigError);
  }
  SUBCASE("protocol names round-trip") {
    CHECK(protocol_from_string("interpolation") == Protocol::Interpolation);
    CHECK(protocol_from_string("extrapolation") == Protocol::Extrapolation);
    CHECK(protocol_from_string("leave-one-out") == Protocol::LeaveOneOut);
    CHECK(to_string(Protocol::LeaveOneOut) == "leave-one-out");
    CHECK_THROWS_AS(protocol_from_string("holdout"), ConfigError);
  }
}

TEST_CASE("training loop") {
  const Dataset ds = tiny_dataset();
  const Split split{Protocol::Interpolation, {0.2, 0.8}, {0.5}};

  SUBCASE("zero iterations leave the model unchanged with empty history") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    const TrainResult res = train(model, ds, split, tiny_config(0));
    CHECK(bits_equal(res.model.theta, model.theta));
    CHECK(res.history.empty());
  }
  SUBCASE("same config and seed reproduce the run bit for bit") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    const TrainResult a = train(model, ds, split, tiny_config(60));
    const TrainResult b = train(model, ds, split, tiny_config(60));
    REQUIRE(a.history.size() == b.history.size());
    for (size_t i = 0; i < a.history.size(); ++i) {
      CHECK(a.history[i].iteration == b.history[i].iteration);
      CHECK(a.history[i].loss == b.history[i].loss);
    }
    CHECK(bits_equal(a.model.theta, b.model.theta));
  }
  SUBCASE("test-sample targets cannot influence training") {
    Dataset corrupted = tiny_dataset();
    for (Sample& s : corrupted.samples)
      if (s.param == 0.5)
        for (double& v : s.target.x) v *= 2.0;
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    const TrainResult clean = train(model, ds, split, tiny_config(40));
    const TrainResult dirty = train(model, corrupted, split, tiny_config(40));
    CHECK(bits_equal(clean.model.theta, dirty.model.theta));
  }
  SUBCASE("loss history is recorded at the eval interval") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    const TrainResult res = train(model, ds, split, tiny_config(35));
    REQUIRE(!res.history.empty());
    CHECK(res.history.front().iteration == 1);
    CHECK(res.history.back().iteration == 35);
    for (const LossRecord& r : res.history) CHECK(std::isfinite(r.loss));
  }
  SUBCASE("train parameters must exist in the dataset") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    CHECK_THROWS_AS(train(model, ds, {Protocol::Interpolation, {0.25, 0.8}, {0.5}},
                          tiny_config(5)),
                    ConfigError);
  }
  SUBCASE("interior batch cannot exceed the interior point count") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    TrainConfig tc = tiny_config(5);
    tc.interior_batch = 1000;  // 9x9 grid has 49 interior points
    CHECK_THROWS_AS(train(model, ds, split, tc), ConfigError);
  }
  SUBCASE("sensor count mismatch is a contract error") {
    const MeshONetModel model = init_model(tiny_spec(8), 3);
    CHECK_THROWS_AS(train(model, ds, split, tiny_config(5)), ContractError);
  }
  SUBCASE("non-finite loss aborts with the iteration and last good parameters") {
    Dataset poisoned = tiny_dataset();
    for (Sample& s : poisoned.samples)
      if (s.param == 0.2) s.target.x[4] = 1e200;  // boundary point: sampled every iteration
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    try {
      train(model, poisoned, split, tiny_config(20));
      FAIL("expected TrainingAborted");
    } catch (const TrainingAborted& e) {
      CHECK(e.iteration == 1);
      CHECK(bits_equal(e.last_good_theta, model.theta));
    }
  }
}

TEST_CASE("learning-rate schedule") {
  TrainConfig tc;
  tc.lr = 1e-3;
  SUBCASE("constant by default") {
    CHECK(tc.lr_at(1) == 1e-3);
    CHECK(tc.lr_at(100000) == 1e-3);
  }
  SUBCASE("step decay with hold") {
    tc.lr_decay = 0.5;
    tc.lr_decay_every = 100;
    tc.lr_hold = 200;
    CHECK(tc.lr_at(1) == 1e-3);
    CHECK(tc.lr_at(200) == 1e-3);
    CHECK(tc.lr_at(201) == 1e-3);           // decay starts after the hold
    CHECK(tc.lr_at(301) == doctest::Approx(5e-4));
    CHECK(tc.lr_at(501) == doctest::Approx(1.25e-4));
  }
}

TEST_CASE("random interior sampling covers the lattice") {
  // coupon-collector bound, computed directly: P(some point never sampled in
  // T iterations) <= n * (1 - b/n)^T
  auto miss_probability = [](double n, double b, double T) {
    return n * std::exp(T * std::log1p(-b / n));
  };
  CHECK(miss_probability(961, 256, 1000) <= 1e-6);   // default 33x33 profile
  CHECK(miss_probability(225, 225, 1000) == 0.0);    // 17x17 CI profile is exhaustive
  CHECK(miss_probability(49, 20, 1000) <= 1e-6);     // the tiny test profile
}

TEST_CASE("evaluation metrics") {
  const Dataset ds = tiny_dataset();
  SUBCASE("relative error of the target against itself is zero") {
    CHECK(relative_l2(ds.samples[0].target, ds.samples[0].target) == 0.0);
  }
  SUBCASE("constant-zero prediction against nonzero targets has error 1") {
    PhysMesh zero(9, 9, Topology::H);
    CHECK(relative_l2(zero, ds.samples[0].target) == 1.0);
  }
  SUBCASE("evaluate emits one row per requested parameter") {
    const MeshONetModel model = init_model(tiny_spec(16), 3);
    const auto rows = evaluate(model, ds, {0.5, 0.2});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].param == 0.5);
    CHECK(rows[1].param == 0.2);
    for (const auto& r : rows) {
      CHECK(std::isfinite(r.rel_l2));
      CHECK(r.quality.cell_count == 64);
      CHECK(std::isfinite(r.quality.boundary_deviation));
      CHECK(r.forward_seconds >= 0.0);
    }
    CHECK_THROWS_AS(evaluate(model, ds, {0.123}), ConfigError);
  }
}

TEST_CASE("training loss decreases by orders of magnitude") {
  // regression guard on the shipped defaults, scaled down: single arch
  // sample, 17x17, 3000 iterations
  SolverConfig solver;
  const Dataset ds = build_dataset("arch", {0.5, 0.3}, 17, 17, 32, solver, 1);
  const Split split{Protocol::LeaveOneOut, {0.5}, {0.3}};
  TrainConfig tc;
  tc.iterations = 3000;
  tc.interior_batch = 225;
  tc.lr = 1e-3;
  tc.adam.beta1 = 0.95;
  tc.adam.beta2 = 0.99;
  tc.seed = 11;
  tc.eval_interval = 1;
  ModelSpec spec = tiny_spec(32);
  spec.k = 32;
  spec.branch_hidden = {32, 32};
  spec.trunk_hidden = {32, 32};
  const TrainResult res = train(init_model(spec, 2), ds, split, tc);
  double first = 0.0, last = 0.0;
  for (size_t i = 0; i < 100; ++i) first += res.history[i].loss;
  for (size_t i = res.history.size() - 100; i < res.history.size(); ++i)
    last += res.history[i].loss;
  CHECK(std::isfinite(first));
  CHECK(first / last >= 100.0);
}

TEST_CASE("annulus training smoke test") {
  SolverConfig solver;
  const Dataset ds = build_dataset("annulus", {0.45, 0.55, 0.5}, 24, 9, 16, solver, 1);
  const Split split{Protocol::Interpolation, {0.45, 0.55}, {0.5}};
  TrainConfig tc;
  tc.iterations = 50;
  tc.interior_batch = 60;  // 24 * 7 = 168 interior points
  tc.seed = 5;
  tc.eval_interval = 10;
  const TrainResult res = train(init_model(tiny_spec(16), 4), ds, split, tc);
  CHECK(res.history.back().iteration == 50);
  CHECK(std::isfinite(res.history.back().loss));
  const auto rows = evaluate(res.model, ds, {0.5});
  CHECK(std::isfinite(rows[0].rel_l2));
}

TEST_CASE("experiment config parsing") {
  SUBCASE("defaults survive an empty config") {
    const ExperimentConfig cfg = parse_config_text("", "test");
    CHECK(cfg.family == "arch");
    CHECK(cfg.n_xi == 33);
    CHECK(cfg.k == 100);
    CHECK(cfg.q == 5);
    CHECK(cfg.iterations == 100000);
    CHECK(cfg.trunk_hidden == std::vector<int>{128, 128, 128});
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("keys parse into typed fields") {
    const ExperimentConfig cfg = parse_config_text(
        "family = hexagon\n"
        "protocol = extrapolation\n"
        "train_params = 0.0, 0.1\n"
        "test_params = 0.3\n"
        "resolution = 17x17\n"
        "sensors = 64\n"
        "iterations = 500   # comment\n"
        "lr = 5e-4\n"
        "lr_decay = 0.5\n"
        "lr_decay_every = 100\n"
        "lr_hold = 50\n"
        "refine_resolutions = 9, 17\n",
        "test");
    CHECK(cfg.family == "hexagon");
    CHECK(cfg.train_params == std::vector<double>{0.0, 0.1});
    CHECK(cfg.n_xi == 17);
    CHECK(cfg.sensors == 64);
    CHECK(cfg.iterations == 500);
    CHECK(cfg.lr == 5e-4);
    CHECK(cfg.lr_hold == 50);
    CHECK(cfg.refine_resolutions == std::vector<int>{9, 17});
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("familly = arch\n", "test"),
                         doctest::Contains("unknown key"), ConfigError);
  }
  SUBCASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n", "test"), ConfigError);
  }
  SUBCASE("malformed lines name the line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("family arch\n", "test"), doctest::Contains(":1:"),
                         ConfigError);
  }
  SUBCASE("test params inside the train set fail validation before any compute") {
    const ExperimentConfig cfg = parse_config_text(
        "train_params = 0.1, 0.9\ntest_params = 0.1\n", "test");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("split rule violations fail validation") {
    const ExperimentConfig cfg = parse_config_text(
        "protocol = interpolation\ntrain_params = 0.1, 0.9\ntest_params = 0.95\n", "test");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}
