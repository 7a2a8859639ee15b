#include "meshonet/mesh.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "meshonet/errors.hpp"

namespace meshonet {

CompGrid::CompGrid(int nx, int ne, Topology t) : n_xi(nx), n_eta(ne), topology(t) {
  if (nx < 3 || ne < 3)
    throw ContractError("computational grid needs at least 3 points per direction, got " +
                        std::to_string(nx) + "x" + std::to_string(ne));
}

void write_mesh(const PhysMesh& mesh, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "MESHONET 1 %s\n", mesh.topology == Topology::H ? "H" : "O");
  std::fprintf(f, "%d %d\n", mesh.n_xi, mesh.n_eta);
  for (size_t p = 0; p < mesh.point_count(); ++p)
    std::fprintf(f, "%.17g %.17g\n", mesh.x[p], mesh.y[p]);
  if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& tok, const std::string& path, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0') parse_fail(path, line, "expected a number, got '" + tok + "'");
  return v;
}

}  // namespace

PhysMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string magic, version, topo;
    hs >> magic >> version >> topo;
    if (magic != "MESHONET") parse_fail(path, lineno, "not a MESHONET mesh file");
    if (version != "1")
      parse_fail(path, lineno, "unsupported mesh format version '" + version + "'");
    if (topo != "H" && topo != "O")
      parse_fail(path, lineno, "unknown topology '" + topo + "'");
    std::string extra;
    if (hs >> extra) parse_fail(path, lineno, "trailing token '" + extra + "' in header");

    if (!std::getline(in, line)) parse_fail(path, 2, "missing dimension line");
    ++lineno;
    std::istringstream ds(line);
    long nx = 0, ne = 0;
    if (!(ds >> nx >> ne)) parse_fail(path, lineno, "expected '<n_xi> <n_eta>'");
    if (ds >> extra) parse_fail(path, lineno, "trailing token '" + extra + "' after dimensions");
    if (nx < 2 || ne < 2 || nx > 100000 || ne > 100000)
      parse_fail(path, lineno, "bad mesh dimensions " + std::to_string(nx) + "x" +
                                   std::to_string(ne));

    PhysMesh mesh(int(nx), int(ne), topo == "H" ? Topology::H : Topology::O);
    for (size_t p = 0; p < mesh.point_count(); ++p) {
      if (!std::getline(in, line))
        parse_fail(path, lineno + 1, "unexpected end of file: expected " +
                                         std::to_string(mesh.point_count()) + " points, got " +
                                         std::to_string(p));
      ++lineno;
      std::istringstream ps(line);
      std::string tx, ty;
      if (!(ps >> tx >> ty)) parse_fail(path, lineno, "expected '<x> <y>'");
      if (ps >> extra) parse_fail(path, lineno, "trailing token '" + extra + "'");
      mesh.x[p] = parse_double(tx, path, lineno);
      mesh.y[p] = parse_double(ty, path, lineno);
    }
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ts(line);
      std::string tok;
      if (ts >> tok) parse_fail(path, lineno, "trailing content after last point");
    }
    return mesh;
  }
}

}  // namespace meshonet
