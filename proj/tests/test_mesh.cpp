#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "meshonet/errors.hpp"
#include "meshonet/mesh.hpp"
#include "meshonet/quality.hpp"
#include "meshonet/tfi.hpp"
#include "oracles.hpp"

using namespace meshonet;
namespace fs = std::filesystem;

namespace {

PhysMesh uniform_square(int n) {
  PhysMesh m(n, n, Topology::H);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.xat(i, j) = double(i) / (n - 1);
      m.yat(i, j) = double(j) / (n - 1);
    }
  return m;
}

PhysMesh random_mesh(int nx, int ne, Topology topo, std::mt19937_64& rng, double wiggle) {
  PhysMesh m(nx, ne, topo);
  std::uniform_real_distribution<double> d(-wiggle, wiggle);
  for (int j = 0; j < ne; ++j)
    for (int i = 0; i < nx; ++i) {
      m.xat(i, j) = double(i) / (nx - 1) + d(rng);
      m.yat(i, j) = double(j) / (ne - 1) + d(rng);
    }
  return m;
}

std::string tmp_path(const char* name) {
  return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("computational grid lattice") {
  const CompGrid h(5, 9, Topology::H);
  CHECK(h.xi(0) == 0.0);
  CHECK(h.xi(4) == 1.0);
  CHECK(h.xi(1) == 0.25);
  CHECK(h.eta(8) == 1.0);
  const CompGrid o(8, 5, Topology::O);
  CHECK(o.xi(0) == 0.0);
  CHECK(o.xi(7) == 0.875);  // no duplicated seam column
  CHECK(o.eta(4) == 1.0);
  CHECK_THROWS_AS(CompGrid(2, 5, Topology::H), ContractError);
  CHECK_THROWS_AS(CompGrid(5, 2, Topology::H), ContractError);
}

TEST_CASE("mesh file round trip") {
  std::mt19937_64 rng(11);
  for (auto topo : {Topology::H, Topology::O}) {
    const PhysMesh m = random_mesh(7, 5, topo, rng, 0.3);
    const std::string path = tmp_path("roundtrip.txt");
    write_mesh(m, path);
    const PhysMesh r = read_mesh(path);
    REQUIRE(r.n_xi == m.n_xi);
    REQUIRE(r.n_eta == m.n_eta);
    CHECK(r.topology == m.topology);
    CHECK(std::memcmp(r.x.data(), m.x.data(), m.x.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(r.y.data(), m.y.data(), m.y.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("mesh file format details") {
  const PhysMesh m = uniform_square(3);
  const std::string path = tmp_path("square3.txt");
  write_mesh(m, path);

  SUBCASE("3x3 file has exactly 11 lines") {
    std::ifstream in(path);
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 11);
  }
  SUBCASE("unsupported version is a versioned parse error") {
    const std::string bad = tmp_path("badver.txt");
    std::ofstream out(bad);
    out << "MESHONET 2 H\n3 3\n";
    out.close();
    CHECK_THROWS_WITH_AS(read_mesh(bad), doctest::Contains("version"), IoError);
  }
  SUBCASE("non-numeric token names the line") {
    const std::string bad = tmp_path("badnum.txt");
    std::ofstream out(bad);
    out << "MESHONET 1 H\n3 3\n0 0\n0.5 zap\n";
    out.close();
    CHECK_THROWS_WITH_AS(read_mesh(bad), doctest::Contains(":4:"), IoError);
  }
  SUBCASE("truncated file is rejected") {
    const std::string bad = tmp_path("short.txt");
    std::ofstream out(bad);
    out << "MESHONET 1 H\n3 3\n0 0\n";
    out.close();
    CHECK_THROWS_AS(read_mesh(bad), IoError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(read_mesh(tmp_path("nope.txt")), IoError); }
}

TEST_CASE("maximum included angle") {
  SUBCASE("uniform square mesh is all right angles") {
    const QualityReport rep = max_included_angle(uniform_square(9));
    CHECK(rep.cell_count == 64);
    CHECK(rep.mean_max_angle == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(rep.worst_angle == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(rep.histogram[0] == 64);
    CHECK(rep.degenerate_cells == 0);
  }
  SUBCASE("parallelogram spanned by (1,0) and (1,1)") {
    PhysMesh m(2, 2, Topology::H);
    m.xat(0, 0) = 0; m.yat(0, 0) = 0;
    m.xat(1, 0) = 1; m.yat(1, 0) = 0;
    m.xat(0, 1) = 1; m.yat(0, 1) = 1;
    m.xat(1, 1) = 2; m.yat(1, 1) = 1;
    const auto angles = cell_max_angles(m);
    REQUIRE(angles.size() == 1);
    CHECK(angles[0] == doctest::Approx(135.0).epsilon(1e-12));
  }
  SUBCASE("degenerate cell flagged as 360, not skipped") {
    PhysMesh m(2, 2, Topology::H);
    m.xat(0, 0) = 0; m.yat(0, 0) = 0;
    m.xat(1, 0) = 0; m.yat(1, 0) = 0;  // coincides with (0,0)
    m.xat(0, 1) = 0; m.yat(0, 1) = 1;
    m.xat(1, 1) = 1; m.yat(1, 1) = 1;
    const QualityReport rep = max_included_angle(m);
    CHECK(rep.worst_angle == 360.0);
    CHECK(rep.degenerate_cells == 1);
    CHECK(rep.cell_count == 1);
  }
  SUBCASE("invariant under rigid motion") {
    std::mt19937_64 rng(5);
    const PhysMesh m = random_mesh(8, 6, Topology::H, rng, 0.2);
    const auto base = cell_max_angles(m);
    const double c = std::cos(0.7), s = std::sin(0.7);
    PhysMesh moved = m;
    for (size_t p = 0; p < m.point_count(); ++p) {
      moved.x[p] = c * m.x[p] - s * m.y[p] + 3.25;
      moved.y[p] = s * m.x[p] + c * m.y[p] - 1.5;
    }
    const auto rotated = cell_max_angles(moved);
    for (size_t k = 0; k < base.size(); ++k)
      CHECK(std::fabs(base[k] - rotated[k]) <= 1e-9);
  }
  SUBCASE("invariant under uniform scaling") {
    std::mt19937_64 rng(6);
    const PhysMesh m = random_mesh(6, 7, Topology::H, rng, 0.2);
    const auto base = cell_max_angles(m);
    PhysMesh scaled = m;
    for (size_t p = 0; p < m.point_count(); ++p) {
      scaled.x[p] = 1737.5 * m.x[p];
      scaled.y[p] = 1737.5 * m.y[p];
    }
    const auto big = cell_max_angles(scaled);
    for (size_t k = 0; k < base.size(); ++k) CHECK(std::fabs(base[k] - big[k]) <= 1e-9);
  }
  SUBCASE("histogram binning") {
    CHECK(histogram_bin(90.0) == 0);
    CHECK(histogram_bin(94.999) == 0);
    CHECK(histogram_bin(95.0) == 1);
    CHECK(histogram_bin(179.9) == 17);
    CHECK(histogram_bin(360.0) == 17);  // clamped
    CHECK(histogram_bin(45.0) == 0);    // clamped
  }
}

TEST_CASE("inverted cell counting") {
  SUBCASE("uniform grid has none") { CHECK(count_inverted(uniform_square(9)) == 0); }
  SUBCASE("swapping two interior columns folds the mesh") {
    PhysMesh m = uniform_square(9);
    for (int j = 0; j < 9; ++j) {
      std::swap(m.xat(3, j), m.xat(4, j));
      std::swap(m.yat(3, j), m.yat(4, j));
    }
    CHECK(count_inverted(m) > 0);
  }
  SUBCASE("agrees with the shoelace orientation oracle on TFI hexagon") {
    const GeometryCase c = make_hexagon(0.4);
    const PhysMesh m = tfi_generate(c, CompGrid(33, 33, Topology::H));
    CHECK(count_inverted(m) == oracle::shoelace_inverted_count(m));
  }
  SUBCASE("agrees with the shoelace oracle on 100 random small meshes") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> size(3, 6);
    for (int rep = 0; rep < 100; ++rep) {
      const auto topo = rep % 3 == 0 ? Topology::O : Topology::H;
      PhysMesh m = random_mesh(size(rng), size(rng), topo, rng, 0.45);
      CAPTURE(rep);
      CHECK(count_inverted(m) == oracle::shoelace_inverted_count(m));
    }
  }
  SUBCASE("valid O-topology mesh has none") {
    const GeometryCase c = make_annulus_hole(0.5);
    const PhysMesh m = tfi_generate(c, CompGrid(24, 9, Topology::O));
    CHECK(count_inverted(m) == 0);
    CHECK(m.cells_xi() == 24);  // seam cells included
  }
}

TEST_CASE("boundary deviation and full report") {
  const GeometryCase c = make_arch(0.5);
  const PhysMesh m = tfi_generate(c, CompGrid(17, 17, Topology::H));
  CHECK(boundary_deviation(m, c) == 0.0);

  const QualityReport rep = assess(m, &c);
  CHECK(rep.inverted_cells == 0);
  CHECK(rep.boundary_deviation == 0.0);
  CHECK(rep.cell_count == 256);

  const QualityReport bare = assess(m);
  CHECK(std::isnan(bare.boundary_deviation));

  const GeometryCase o = make_annulus_hole(0.45);
  const PhysMesh om = tfi_generate(o, CompGrid(24, 9, Topology::O));
  CHECK(boundary_deviation(om, o) == 0.0);
}
