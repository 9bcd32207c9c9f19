#include <cmath>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/optimizer.hpp"
#include "fracshape/triangulate.hpp"

using namespace fracshape;

namespace {

DescentOptions coarse_options() {
    DescentOptions o;
    o.h_far = 0.12;
    o.h_tip = 0.006;
    o.max_inner_iterations = 400;
    return o;
}

}  // namespace

TEST_CASE("objective decomposes into its three parts") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 1e-3};
    auto w = solve_displacement(m, mat, bc);
    auto val = evaluate_objective(m, mat, w);
    CHECK(val.E_bulk == doctest::Approx(bulk_energy(m, mat, w)).epsilon(1e-14));
    CHECK(val.E_fracture == doctest::Approx(0.5 * mat.G_c * crack_length(m)).epsilon(1e-14));
    CHECK(val.J_reg == doctest::Approx(mat.nu_reg * slit_area(m)).epsilon(1e-14));
    CHECK(val.J == doctest::Approx(val.E_bulk + val.E_fracture + val.J_reg).epsilon(1e-14));
}

TEST_CASE("option validation rejects nonsense") {
    DescentOptions o;
    o.step_size = -1.0;
    CHECK_THROWS_AS(o.validate(), ValidationError);
    LoadProgram p;
    p.fine_increment = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("onset detection finds the first growth exceeding the threshold") {
    std::vector<StepRecord> recs(5);
    for (int i = 0; i < 5; ++i) {
        recs[i].displacement = 1e-3 * (i + 1);
        recs[i].crack_length = 1.03;
    }
    CHECK(!detect_onset(recs).has_value());
    recs[3].crack_length = 1.03 + 0.02;
    recs[4].crack_length = 1.03 + 0.05;
    auto d = detect_onset(recs);
    REQUIRE(d.has_value());
    CHECK(*d == doctest::Approx(4e-3));
}

TEST_CASE("inner descent converges without growth at low load") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 5e-4};
    auto [out, rep] = inner_descent(m, mat, bc, coarse_options());
    CHECK(rep.converged);
    CHECK(!rep.stalled);
    CHECK(crack_length(out) >= crack_length(m) - 1e-12);
    CHECK(std::abs(crack_length(out) - crack_length(m)) < 5e-3);
}

TEST_CASE("load program records the schedule and is deterministic") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    LoadProgram prog;
    prog.coarse_increment = 1e-3;
    prog.coarse_until = 2e-3;
    prog.fine_increment = 1e-3;
    prog.max_displacement = 3e-3;
    auto opts = coarse_options();

    int calls = 0;
    auto recs = run_load_program(m, mat, prog, opts,
                                 [&](int, const StepRecord&, const TriMesh&) { ++calls; });
    REQUIRE(recs.size() == 3);
    CHECK(calls == 3);
    CHECK(recs[0].displacement == doctest::Approx(1e-3));
    CHECK(recs[1].displacement == doctest::Approx(2e-3));
    CHECK(recs[2].displacement == doctest::Approx(3e-3));
    for (const auto& r : recs) {
        CHECK(r.node_count > 0);
        CHECK(r.triangle_count > 0);
        CHECK(r.tau[1] > 0.0);
        CHECK(r.E_bulk > 0.0);
    }
    // crack length never decreases
    for (std::size_t i = 1; i < recs.size(); ++i)
        CHECK(recs[i].crack_length >= recs[i - 1].crack_length - 1e-12);
    // linear response at these loads: tau_y roughly proportional to displacement
    CHECK(recs[1].tau[1] / recs[0].tau[1] == doctest::Approx(2.0).epsilon(0.05));

    auto recs2 = run_load_program(m, mat, prog, opts);
    REQUIRE(recs2.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs2[i].crack_length == recs[i].crack_length);
        CHECK(recs2[i].tau[1] == recs[i].tau[1]);
        CHECK(recs2[i].E_bulk == recs[i].E_bulk);
        CHECK(recs2[i].node_count == recs[i].node_count);
    }
}
