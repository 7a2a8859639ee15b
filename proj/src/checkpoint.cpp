#include "meshonet/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "meshonet/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint i/o assumes a little-endian host");

namespace meshonet {

namespace {

constexpr char kMagic[8] = {'M', 'O', 'N', 'E', 'T', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
  std::FILE* f;
  const std::string& path;

  void raw(const void* p, size_t n) {
    if (std::fwrite(p, 1, n, f) != n) throw IoError("write failed for '" + path + "'");
  }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
};

struct Reader {
  std::FILE* f;
  const std::string& path;

  void raw(void* p, size_t n) {
    if (std::fread(p, 1, n, f) != n)
      throw IoError("unexpected end of checkpoint '" + path + "'");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  std::string str() {
    const std::uint64_t n = u64();
    if (n > (1u << 20)) throw IoError("corrupt string length in '" + path + "'");
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
};

void write_widths(Writer& w, const std::vector<int>& v) {
  w.u64(v.size());
  for (int x : v) w.u64(std::uint64_t(x));
}

std::vector<int> read_widths(Reader& r) {
  const std::uint64_t n = r.u64();
  if (n > 64) throw IoError("corrupt layer list in '" + r.path + "'");
  std::vector<int> v(n);
  for (auto& x : v) x = int(r.u64());
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const MeshONetModel& model,
                     const CheckpointMeta& meta) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  Writer w{f, path};
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(meta.topology == Topology::H ? 0u : 1u);
  w.u64(std::uint64_t(model.spec.m));
  w.u64(std::uint64_t(model.spec.k));
  w.u64(std::uint64_t(model.spec.lift.q));
  write_widths(w, model.spec.branch_hidden);
  write_widths(w, model.spec.trunk_hidden);
  w.u64(model.seed);
  w.u64(meta.iterations);
  w.f64(meta.final_loss);
  w.str(meta.family);
  w.u64(meta.train_params.size());
  for (double p : meta.train_params) w.f64(p);
  w.u64(meta.layout.size());
  for (const SensorParam& s : meta.layout) {
    w.u32(std::uint32_t(s.curve));
    w.f64(s.t);
  }
  w.u64(std::uint64_t(model.theta.size()));
  w.raw(model.theta.data(), sizeof(double) * size_t(model.theta.size()));
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open checkpoint '" + path + "'");
  struct Closer {
    std::FILE* f;
    ~Closer() { std::fclose(f); }
  } closer{f};
  Reader r{f, path};

  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("'" + path + "' is not a MeshONet checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version) + " in '" + path +
                  "'");

  Checkpoint ck;
  ck.meta.topology = r.u32() == 0 ? Topology::H : Topology::O;
  ck.model.spec.m = int(r.u64());
  ck.model.spec.k = int(r.u64());
  ck.model.spec.lift.q = int(r.u64());
  ck.model.spec.branch_hidden = read_widths(r);
  ck.model.spec.trunk_hidden = read_widths(r);
  ck.model.seed = r.u64();
  ck.meta.iterations = r.u64();
  ck.meta.final_loss = r.f64();
  ck.meta.family = r.str();
  const std::uint64_t n_tp = r.u64();
  if (n_tp > (1u << 16)) throw IoError("corrupt train-param count in '" + path + "'");
  ck.meta.train_params.resize(n_tp);
  for (auto& p : ck.meta.train_params) p = r.f64();
  const std::uint64_t n_sensors = r.u64();
  if (n_sensors > (1u << 24)) throw IoError("corrupt sensor count in '" + path + "'");
  ck.meta.layout.resize(n_sensors);
  for (auto& s : ck.meta.layout) {
    s.curve = int(r.u32());
    s.t = r.f64();
  }
  ck.model.spec.validate();
  const std::uint64_t n_theta = r.u64();
  if (n_theta != std::uint64_t(ck.model.spec.param_count()))
    throw IoError("parameter blob size in '" + path + "' does not match the model spec");
  ck.model.theta.resize(long(n_theta));
  r.raw(ck.model.theta.data(), sizeof(double) * size_t(n_theta));
  return ck;
}

}  // namespace meshonet
