#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fracshape/optimizer.hpp"
#include "fracshape/shapegrad.hpp"
#include "fracshape/triangulate.hpp"

using namespace fracshape;

namespace {

std::set<int> outer_boundary_nodes(const TriMesh& m) {
    std::set<int> fixed;
    for (const auto& be : m.boundary_edges)
        if (be.tag != BoundaryTag::Crack) {
            fixed.insert(be.a);
            fixed.insert(be.b);
        }
    return fixed;
}

// smooth bump direction vanishing on the outer boundary
NodalVectorField bump_direction(const TriMesh& m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double ax = U(rng), ay = U(rng), px = U(rng) * 3.0, py = U(rng) * 3.0;
    auto fixed = outer_boundary_nodes(m);
    NodalVectorField W(m.node_count(), Vec2{0.0, 0.0});
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < m.node_count(); ++i) {
        if (fixed.count(i)) continue;
        double x = m.nodes[i][0], y = m.nodes[i][1];
        double b = std::sin(pi * x) * std::sin(pi * y);  // zero on the square rim
        W[i] = {ax * b * std::cos(px * x + py * y), ay * b * std::sin(px * x - py * y)};
    }
    return W;
}

double objective_at(TriMesh m, const MaterialParams& mat, const DirichletBC& bc,
                    const NodalVectorField& W, double eps) {
    m = deform(m, W, eps);
    auto w = solve_displacement(m, mat, bc);
    return evaluate_objective(m, mat, w).J;
}

}  // namespace

TEST_CASE("shape derivative pairs to zero with the zero direction") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 1e-3};
    auto w = solve_displacement(m, mat, bc);
    auto g = assemble_shape_derivative(m, mat, w);
    NodalVectorField W(m.node_count(), Vec2{0.0, 0.0});
    CHECK(g.pair(W) == 0.0);
}

TEST_CASE("shape derivative matches a central finite difference") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 2e-3};
    auto w = solve_displacement(m, mat, bc);
    auto g = assemble_shape_derivative(m, mat, w);

    const double eps = 1e-6;
    for (unsigned seed : {11u, 12u, 13u}) {
        auto W = bump_direction(m, seed);
        double fd = (objective_at(m, mat, bc, W, eps) - objective_at(m, mat, bc, W, -eps)) /
                    (2.0 * eps);
        double gv = g.pair(W);
        CHECK(std::abs(gv - fd) / std::abs(fd) <= 1e-4);
    }
}

TEST_CASE("length term over a circular arc integrates the curvature") {
    // polyline on a semicircle of radius r: pairing the fracture-length term
    // with W = outward normal must give |1/2 G_c * (1/r) * (pi r)| = G_c pi/2
    const double r = 0.01;
    const int n = 100;
    TriMesh m;
    for (int i = 0; i <= n; ++i) {
        double a = 3.14159265358979323846 * i / n;
        m.nodes.push_back({r * std::cos(a), r * std::sin(a)});
    }
    // dummy triangle far away so volume assembly has something to iterate
    int b0 = m.node_count();
    m.nodes.push_back({10.0, 10.0});
    m.nodes.push_back({11.0, 10.0});
    m.nodes.push_back({10.0, 11.0});
    m.triangles = {{b0, b0 + 1, b0 + 2}};
    for (int i = 0; i < n; ++i) {
        m.crack_polyline.push_back(i);
        m.boundary_edges.push_back({i, i + 1, BoundaryTag::Crack});
    }
    m.crack_polyline.push_back(n);

    MaterialParams mat;
    mat.nu_reg = 0.0;  // isolate the G_c term
    NodalVectorField w(m.node_count(), Vec2{0.0, 0.0});
    auto g = assemble_shape_derivative(m, mat, w);

    auto geom = curve_geometry(m);
    NodalVectorField W(m.node_count(), Vec2{0.0, 0.0});
    for (int i = 0; i <= n; ++i) W[i] = geom.normal[i];
    double val = std::abs(g.pair(W));
    CHECK(val == doctest::Approx(0.5 * mat.G_c * 3.14159265358979323846).epsilon(0.02));
}

TEST_CASE("deformation field: zero derivative gives a zero field") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    ShapeDerivative g;
    g.g.assign(m.node_count(), Vec2{0.0, 0.0});
    auto V = solve_deformation_field(m, g);
    for (const auto& v : V) CHECK(norm(v) <= 1e-12);
}

TEST_CASE("deformation field vanishes on the outer boundary and descends") {
    TriMesh m = generate_notched_square(0.12, 0.006);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 3e-3};
    auto w = solve_displacement(m, mat, bc);
    auto g = assemble_shape_derivative(m, mat, w);
    auto V = solve_deformation_field(m, g);

    for (int i : outer_boundary_nodes(m)) {
        CHECK(V[i][0] == 0.0);
        CHECK(V[i][1] == 0.0);
    }
    CHECK(g.pair(V) <= 0.0);
    double vmax = 0.0;
    for (const auto& v : V) vmax = std::max(vmax, norm(v));
    CHECK(vmax > 0.0);
}

TEST_CASE("irreversibility projection zeroes exactly the violating nodes") {
    NodalVectorField N = {{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}};
    NodalVectorField V = {{0.5, 2.0}, {1.0, -3.0}, {4.0, 4.0}, {0.25, 0.0}};
    auto P = project_irreversibility(V, N);
    CHECK(P[0][0] == 0.0);  // <V,N> = 0.5 > 0
    CHECK(P[0][1] == 0.0);
    CHECK(P[1][0] == V[1][0]);  // <V,N> = -3 <= 0
    CHECK(P[1][1] == V[1][1]);
    CHECK(P[2][0] == V[2][0]);  // flagged node: N = 0, untouched
    CHECK(P[2][1] == V[2][1]);
    CHECK(P[3][0] == V[3][0]);  // <V,N> = -0.25 <= 0: kept
    CHECK(P[3][1] == V[3][1]);

    // identity case is bitwise
    auto Q = project_irreversibility(P, N);
    for (std::size_t i = 0; i < P.size(); ++i) {
        CHECK(Q[i][0] == P[i][0]);
        CHECK(Q[i][1] == P[i][1]);
    }

    // V = N is fully zeroed at non-flagged nodes
    auto Z = project_irreversibility(N, N);
    CHECK(Z[0][0] == 0.0);
    CHECK(Z[1][1] == 0.0);
    CHECK(Z[3][0] == 0.0);
}
