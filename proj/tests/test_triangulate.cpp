#include <cmath>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/mesh.hpp"
#include "fracshape/triangulate.hpp"

using namespace fracshape;

TEST_CASE("generate_notched_square default sizing matches the benchmark") {
    TriMesh m = generate_notched_square(0.05, 0.005);
    CHECK_NOTHROW(check_mesh(m));
    CHECK(crack_length(m) == doctest::Approx(1.0314159).epsilon(1e-3));
    CHECK(m.node_count() >= 976);
    CHECK(m.node_count() <= 1464);
    CHECK(m.triangle_count() >= 1950);
    CHECK(m.triangle_count() <= 2926);
    CHECK(mesh_quality(m) >= 0.3);
    CHECK(domain_area(m) + slit_area(m) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("generate_notched_square rejects degenerate sizing") {
    CHECK_THROWS_AS(generate_notched_square(0.05, 0.0), InvalidSizing);
    CHECK_THROWS_AS(generate_notched_square(0.004, 0.005), InvalidSizing);
    CHECK_THROWS_AS(generate_notched_square(0.05, 0.02), InvalidSizing);
}

TEST_CASE("boundary tags cover the right parts of the square") {
    TriMesh m = generate_notched_square(0.08, 0.006);
    for (const auto& e : m.boundary_edges) {
        Vec2 mid = 0.5 * (m.nodes[e.a] + m.nodes[e.b]);
        switch (e.tag) {
            case BoundaryTag::Bottom: CHECK(mid[1] == doctest::Approx(0.0)); break;
            case BoundaryTag::Top: CHECK(mid[1] == doctest::Approx(1.0)); break;
            case BoundaryTag::Left: CHECK(mid[0] == doctest::Approx(0.0)); break;
            case BoundaryTag::Right: CHECK(mid[0] == doctest::Approx(1.0)); break;
            case BoundaryTag::Crack:
                CHECK(mid[0] < 1.0);
                CHECK(mid[1] > 0.4);
                CHECK(mid[1] < 0.6);
                break;
        }
    }
}

TEST_CASE("remesh keeps the boundary fixed") {
    TriMesh m = generate_notched_square(0.05, 0.005);
    TriMesh r = remesh(m, 0.05, 0.005);
    CHECK_NOTHROW(check_mesh(r));
    CHECK(crack_length(r) == doctest::Approx(crack_length(m)).epsilon(1e-12));
    CHECK(domain_area(r) == doctest::Approx(domain_area(m)).epsilon(1e-10));
    CHECK(r.crack_polyline.size() == m.crack_polyline.size());
    for (std::size_t i = 0; i < m.crack_polyline.size(); ++i) {
        CHECK(r.nodes[r.crack_polyline[i]][0] == m.nodes[m.crack_polyline[i]][0]);
        CHECK(r.nodes[r.crack_polyline[i]][1] == m.nodes[m.crack_polyline[i]][1]);
    }

    SUBCASE("remesh twice stays above the quality threshold") {
        TriMesh r2 = remesh(r, 0.05, 0.005);
        CHECK(mesh_quality(r2) >= 0.2);
    }
}

TEST_CASE("remesh rejects a self-intersecting boundary") {
    TriMesh m;
    m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    // bow-tie boundary: edges cross
    m.boundary_edges = {{0, 2, BoundaryTag::Bottom},
                        {2, 1, BoundaryTag::Right},
                        {1, 3, BoundaryTag::Top},
                        {3, 0, BoundaryTag::Left}};
    CHECK_THROWS_AS(remesh(m, 0.5, 0.1), MeshingFailure);
}

TEST_CASE("triangulation is deterministic") {
    TriMesh a = generate_notched_square(0.05, 0.005);
    TriMesh b = generate_notched_square(0.05, 0.005);
    CHECK(a.nodes == b.nodes);
    CHECK(a.triangles == b.triangles);
}
