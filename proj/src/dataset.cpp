#include "meshonet/dataset.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "meshonet/errors.hpp"
#include "meshonet/quality.hpp"

namespace meshonet {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sample_stem(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu", index);
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const Sample* Dataset::find(double param) const {
  for (const Sample& s : samples)
    if (s.param == param) return &s;
  return nullptr;
}

std::uint64_t Dataset::config_hash() const {
  std::ostringstream os;
  os << family << '|' << to_string(topology) << '|' << n_xi << 'x' << n_eta << '|'
     << "omega=" << fmt17(solver.omega) << ",tol=" << fmt17(solver.tol)
     << ",max_iters=" << solver.max_iters << '|';
  for (const SensorParam& s : layout) os << s.curve << ':' << fmt17(s.t) << ';';
  return fnv1a(os.str());
}

Dataset build_dataset(const std::string& family, const std::vector<double>& params, int n_xi,
                      int n_eta, int sensors_m, const SolverConfig& solver, int jobs) {
  Dataset ds;
  ds.family = family;
  ds.topology = family_topology(family);
  ds.n_xi = n_xi;
  ds.n_eta = n_eta;
  ds.layout = make_sensor_layout(ds.topology, sensors_m);
  ds.solver = solver;
  ds.solver.init = nullptr;  // datasets always start from TFI
  ds.samples.resize(params.size());

  const CompGrid grid(n_xi, n_eta, ds.topology);
  std::atomic<size_t> next{0};
  struct Failure {
    std::string reason;
    bool nonconvergence = false;
  };
  std::vector<Failure> failures(params.size());

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= params.size()) return;
      try {
        const GeometryCase geom = make_case(family, params[i]);
        const SolveResult res = elliptic_solve(geom, grid, ds.solver);
        if (!res.converged) {
          failures[i] = {"solver did not converge within " + std::to_string(res.iterations) +
                             " sweeps",
                         true};
          continue;
        }
        const long inverted = count_inverted(res.mesh);
        if (inverted > 0) {
          failures[i] = {"converged mesh has " + std::to_string(inverted) + " inverted cells",
                         false};
          continue;
        }
        ds.samples[i].param = params[i];
        ds.samples[i].trace = sample_sensors(geom, sensors_m, ds.layout);
        ds.samples[i].target = res.mesh;
      } catch (const std::exception& e) {
        failures[i] = {e.what(), false};
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, int(params.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t i = 0; i < params.size(); ++i)
    if (!failures[i].reason.empty()) {
      const std::string msg =
          "dataset build rejected sample param=" + fmt17(params[i]) + ": " + failures[i].reason;
      if (failures[i].nonconvergence) throw ConvergenceError(msg);
      throw GeometryError(msg);
    }
  return ds;
}

void write_trace(const SensorTrace& trace, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "MESHONET-TRACE 1\n%d\n", trace.m);
  for (int i = 0; i < trace.m; ++i)
    std::fprintf(f, "%.17g %.17g\n", trace.u1[i], trace.u2[i]);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

SensorTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (header != "MESHONET-TRACE 1")
    throw IoError(path + ":1: not a MESHONET-TRACE version 1 file");
  SensorTrace t;
  if (!(in >> t.m) || t.m < 1) throw IoError(path + ":2: bad sensor count");
  t.u1.resize(t.m);
  t.u2.resize(t.m);
  for (int i = 0; i < t.m; ++i)
    if (!(in >> t.u1[i] >> t.u2[i]))
      throw IoError(path + ": truncated at sensor " + std::to_string(i));
  return t;
}

void write_dataset(const Dataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << "MESHONET-DATASET 1\n";
  manifest << "family " << ds.family << "\n";
  manifest << "topology " << to_string(ds.topology) << "\n";
  manifest << "resolution " << ds.n_xi << " " << ds.n_eta << "\n";
  manifest << "solver omega " << fmt17(ds.solver.omega) << " tol " << fmt17(ds.solver.tol)
           << " max_iters " << ds.solver.max_iters << "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)ds.config_hash());
  manifest << "config_hash " << hash << "\n";
  manifest << "sensors " << ds.layout.size() << "\n";
  for (const SensorParam& s : ds.layout)
    manifest << "sensor " << s.curve << " " << fmt17(s.t) << "\n";
  manifest << "samples " << ds.samples.size() << "\n";
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    const std::string stem = sample_stem(i);
    const std::string trace_name = "trace_" + stem + ".txt";
    const std::string target_name = "target_" + stem + ".txt";
    write_trace(ds.samples[i].trace, (fs::path(dir) / trace_name).string());
    write_mesh(ds.samples[i].target, (fs::path(dir) / target_name).string());
    manifest << "param " << fmt17(ds.samples[i].param) << " trace " << trace_name << " target "
             << target_name << "\n";
  }
  std::ofstream out(fs::path(dir) / "manifest.txt", std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in '" + dir + "'");
  out << manifest.str();
}

Dataset read_dataset(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open '" + manifest_path + "'");
  const fs::path dir = fs::path(manifest_path).parent_path();

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw IoError(manifest_path + ":" + std::to_string(lineno) + ": " + what);
  };
  auto next_line = [&]() {
    if (!std::getline(in, line)) fail("unexpected end of manifest");
    ++lineno;
    return std::istringstream(line);
  };

  Dataset ds;
  {
    auto l = next_line();
    std::string magic, ver;
    l >> magic >> ver;
    if (magic != "MESHONET-DATASET" || ver != "1") fail("not a MESHONET-DATASET version 1 file");
  }
  std::string key;
  next_line() >> key >> ds.family;
  std::string topo;
  next_line() >> key >> topo;
  ds.topology = topology_from_string(topo);
  next_line() >> key >> ds.n_xi >> ds.n_eta;
  {
    auto l = next_line();
    std::string k1, k2, k3;
    l >> key >> k1 >> ds.solver.omega >> k2 >> ds.solver.tol >> k3 >> ds.solver.max_iters;
    if (key != "solver") fail("expected solver line");
  }
  std::string hash;
  next_line() >> key >> hash;
  size_t n_sensors = 0;
  next_line() >> key >> n_sensors;
  if (key != "sensors" || n_sensors < 1) fail("expected sensors line");
  ds.layout.resize(n_sensors);
  for (auto& s : ds.layout) {
    auto l = next_line();
    l >> key >> s.curve >> s.t;
    if (key != "sensor") fail("expected sensor line");
  }
  size_t n_samples = 0;
  next_line() >> key >> n_samples;
  if (key != "samples") fail("expected samples line");
  ds.samples.resize(n_samples);
  for (auto& s : ds.samples) {
    auto l = next_line();
    std::string trace_name, target_name, kt, kg;
    l >> key >> s.param >> kt >> trace_name >> kg >> target_name;
    if (key != "param" || kt != "trace" || kg != "target") fail("expected sample line");
    s.trace = read_trace((dir / trace_name).string());
    s.target = read_mesh((dir / target_name).string());
  }
  char expect[32];
  std::snprintf(expect, sizeof expect, "%016llx", (unsigned long long)ds.config_hash());
  if (hash != expect)
    throw IoError(manifest_path + ": config hash mismatch (manifest edited or stale)");
  return ds;
}

}  // namespace meshonet
