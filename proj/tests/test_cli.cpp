#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracshape/config.hpp"
#include "fracshape/errors.hpp"
#include "fracshape/output.hpp"
#include "fracshape/triangulate.hpp"

using namespace fracshape;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fracshape_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("benchmark presets fill the documented values") {
    auto t = parse_config({"--benchmark", "tension"});
    CHECK(t.material.nu_reg == 1.0);
    CHECK(t.program.direction[0] == 0.0);
    CHECK(t.program.direction[1] == 1.0);
    CHECK(t.program.coarse_increment == 1e-3);
    CHECK(t.program.coarse_until == 4e-3);
    CHECK(t.program.fine_increment == 1e-5);

    auto s = parse_config({"--benchmark", "shear"});
    CHECK(s.material.nu_reg == 10.0);
    CHECK(s.program.direction[0] == -1.0);
    CHECK(s.program.direction[1] == 0.0);
    CHECK(s.program.coarse_increment == 1e-4);
    CHECK(s.program.max_displacement == 2.22e-2);
}

TEST_CASE("flags override presets and bad input is rejected") {
    auto c = parse_config({"--benchmark", "tension", "--gc", "1.5", "--nu", "2.0",
                           "--step-size", "0.02", "--max-displacement", "7e-3",
                           "--snapshot-every", "10", "--out", "/tmp/x"});
    CHECK(c.material.G_c == 1.5);
    CHECK(c.material.nu_reg == 2.0);
    CHECK(c.descent.step_size == 0.02);
    CHECK(c.program.max_displacement == 7e-3);
    CHECK(c.snapshot_every == 10);
    CHECK(c.out_dir == "/tmp/x");

    CHECK_THROWS_AS(parse_config({"--benchmark", "bogus"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--frobnicate", "1"}), UsageError);
    CHECK_THROWS_AS(parse_config({"--gc", "-3"}), ValidationError);
    CHECK_THROWS_AS(parse_config({"--snapshot-every", "0"}), ValidationError);
}

TEST_CASE("config text keys apply between preset and flags") {
    std::string text = "# comment line\ngc = 2.0\nsnapshot_every = 7\n";
    auto c = parse_config({"--benchmark", "tension", "--config", "dummy.cfg", "--gc", "3.0"},
                          text);
    CHECK(c.material.G_c == 3.0);  // flag beats config text
    CHECK(c.snapshot_every == 7);
    CHECK_THROWS_AS(parse_config({"--config", "d.cfg"}, "no_such_key = 1\n"), UsageError);
}

TEST_CASE("step csv writes the exact header and round-trips values") {
    TempDir tmp;
    std::vector<StepRecord> recs(2);
    recs[0].displacement = 1e-3;
    recs[0].tau = {0.1234567890123456789, -7.0};
    recs[0].E_bulk = 3.3;
    recs[0].crack_length = 1.0312145;
    recs[0].node_count = 1153;
    recs[0].triangle_count = 2178;
    recs[1] = recs[0];
    recs[1].displacement = 2e-3;
    recs[1].inner_iterations = 17;
    recs[1].remesh_count = 1;

    auto path = (tmp.path / "steps.csv").string();
    write_step_csv(recs, path);
    std::string text = slurp(path);
    CHECK(text.rfind("step,displacement_mm,tau_x,tau_y,E_bulk,E_fracture,J_reg,"
                     "crack_length_mm,nodes,triangles,inner_iters,remeshes\n",
                     0) == 0);
    CHECK(text.find("\r") == std::string::npos);

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    CHECK(field == "0");
    std::getline(row, field, ',');
    CHECK(std::stod(field) == recs[0].displacement);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == recs[0].tau[0]);
    std::getline(row, field, ',');
    CHECK(std::stod(field) == recs[0].tau[1]);
}

TEST_CASE("snapshot file carries the mesh and field sections") {
    TempDir tmp;
    TriMesh m = generate_notched_square(0.15, 0.008);
    NodalVectorField w(m.node_count(), Vec2{0.0, 0.0});
    NodalVectorField V(m.node_count(), Vec2{0.0, 0.0});
    NodalScalarField phi(m.node_count(), 0.0);
    auto path = (tmp.path / "snapshot_0.vtk").string();
    write_snapshot(m, w, V, phi, path);
    std::string text = slurp(path);
    CHECK(text.rfind("# vtk DataFile Version 3.0", 0) == 0);
    CHECK(text.find("POINTS " + std::to_string(m.node_count()) + " double") !=
          std::string::npos);
    CHECK(text.find("CELL_TYPES " + std::to_string(m.triangle_count())) != std::string::npos);
    CHECK(text.find("VECTORS displacement double") != std::string::npos);
    CHECK(text.find("VECTORS deformation double") != std::string::npos);
    CHECK(text.find("SCALARS phi double") != std::string::npos);
    CHECK(text.find("SCALARS quality double") != std::string::npos);

    // each cell row starts with the vertex count 3
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line) && line.rfind("CELLS", 0) != 0) {
    }
    for (int t = 0; t < m.triangle_count(); ++t) {
        REQUIRE(std::getline(in, line));
        CHECK(line.rfind("3 ", 0) == 0);
    }
}

TEST_CASE("run summary echoes key=value lines") {
    TempDir tmp;
    auto path = (tmp.path / "run.summary").string();
    write_summary({{"benchmark", "tension"}, {"onset_displacement", "4.5e-3"}}, path);
    std::string text = slurp(path);
    CHECK(text.find("benchmark=tension\n") != std::string::npos);
    CHECK(text.find("onset_displacement=4.5e-3\n") != std::string::npos);
}
