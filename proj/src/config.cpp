#include "meshonet/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "meshonet/errors.hpp"

namespace meshonet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  const char* s = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& v, const std::string& key) {
  const char* s = v.c_str();
  char* end = nullptr;
  const long x = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split_commas(v)) out.push_back(to_double(tok, key));
  return out;
}

std::vector<int> to_ints(const std::string& v, const std::string& key) {
  std::vector<int> out;
  for (const auto& tok : split_commas(v)) out.push_back(int(to_long(tok, key)));
  return out;
}

void parse_resolution(const std::string& v, int& nx, int& ne) {
  const auto x = v.find('x');
  if (x == std::string::npos)
    throw ConfigError("resolution must look like '33x33', got '" + v + "'");
  nx = int(to_long(trim(v.substr(0, x)), "resolution"));
  ne = int(to_long(trim(v.substr(x + 1)), "resolution"));
}

}  // namespace

Split ExperimentConfig::split() const {
  return {protocol_from_string(protocol), train_params, test_params};
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.omega = omega;
  s.tol = tol;
  s.max_iters = max_iters;
  return s;
}

ModelSpec ExperimentConfig::model_spec() const {
  ModelSpec spec;
  spec.m = sensors;
  spec.k = k;
  spec.lift.q = q;
  spec.branch_hidden = branch_hidden;
  spec.trunk_hidden = trunk_hidden;
  return spec;
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.iterations = iterations;
  t.interior_batch = interior_batch;
  t.lr = lr;
  t.lr_decay = lr_decay;
  t.lr_decay_every = lr_decay_every;
  t.lr_hold = lr_hold;
  t.w_int = w_int;
  t.w_bnd = w_bnd;
  t.seed = seed;
  t.eval_interval = eval_interval;
  return t;
}

void ExperimentConfig::validate() const {
  family_topology(family);         // throws on unknown family
  validate_split(split());          // protocol rules, before any compute
  if (n_xi < 3 || n_eta < 3) throw ConfigError("resolution must be at least 3x3");
  solver().validate();
  model_spec().validate();
  if (iterations < 0) throw ConfigError("iterations must be >= 0");
  if (interior_batch < 1) throw ConfigError("interior_batch must be >= 1");
  if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
  if (lr <= 0) throw ConfigError("lr must be positive");
  if (lr_decay <= 0 || lr_decay > 1.0) throw ConfigError("lr_decay must lie in (0, 1]");
  if (refine_resolutions.empty()) throw ConfigError("refine_resolutions must not be empty");
  for (int r : refine_resolutions)
    if (r < 3) throw ConfigError("refine resolutions must be at least 3");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    seen.push_back(key);

    if (key == "family") cfg.family = value;
    else if (key == "protocol") cfg.protocol = value;
    else if (key == "train_params") cfg.train_params = to_doubles(value, key);
    else if (key == "test_params") cfg.test_params = to_doubles(value, key);
    else if (key == "resolution") parse_resolution(value, cfg.n_xi, cfg.n_eta);
    else if (key == "sensors") cfg.sensors = int(to_long(value, key));
    else if (key == "omega") cfg.omega = to_double(value, key);
    else if (key == "tol") cfg.tol = to_double(value, key);
    else if (key == "max_iters") cfg.max_iters = to_long(value, key);
    else if (key == "k") cfg.k = int(to_long(value, key));
    else if (key == "q") cfg.q = int(to_long(value, key));
    else if (key == "branch_hidden") cfg.branch_hidden = to_ints(value, key);
    else if (key == "trunk_hidden") cfg.trunk_hidden = to_ints(value, key);
    else if (key == "iterations") cfg.iterations = to_long(value, key);
    else if (key == "interior_batch") cfg.interior_batch = int(to_long(value, key));
    else if (key == "lr") cfg.lr = to_double(value, key);
    else if (key == "lr_decay") cfg.lr_decay = to_double(value, key);
    else if (key == "lr_decay_every") cfg.lr_decay_every = to_long(value, key);
    else if (key == "lr_hold") cfg.lr_hold = to_long(value, key);
    else if (key == "w_int") cfg.w_int = to_double(value, key);
    else if (key == "w_bnd") cfg.w_bnd = to_double(value, key);
    else if (key == "seed") cfg.seed = std::uint64_t(to_long(value, key));
    else if (key == "eval_interval") cfg.eval_interval = to_long(value, key);
    else if (key == "refine_resolutions") cfg.refine_resolutions = to_ints(value, key);
    else if (key == "elliptic_cutoff_seconds") cfg.elliptic_cutoff_seconds = to_double(value, key);
    else
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace meshonet
