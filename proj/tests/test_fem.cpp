#include <cmath>
#include <set>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/fem.hpp"

using namespace fracshape;

namespace {

TriMesh unit_square() {
    TriMesh m;
    m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.boundary_edges = {{0, 1, BoundaryTag::Bottom},
                        {1, 2, BoundaryTag::Right},
                        {2, 3, BoundaryTag::Top},
                        {3, 0, BoundaryTag::Left}};
    return m;
}

NodalVectorField linear_field(const TriMesh& m, double a11, double a12, double a21,
                              double a22, const Vec2& c) {
    NodalVectorField w(m.node_count());
    for (int i = 0; i < m.node_count(); ++i) {
        const Vec2& p = m.nodes[i];
        w[i] = {a11 * p[0] + a12 * p[1] + c[0], a21 * p[0] + a22 * p[1] + c[1]};
    }
    return w;
}

}  // namespace

TEST_CASE("material parameters are validated") {
    MaterialParams mat;
    CHECK_NOTHROW(mat.validate());
    mat.mu = -1.0;
    CHECK_THROWS_AS(mat.validate(), ValidationError);
}

TEST_CASE("displacement gradients reproduce a linear field exactly") {
    TriMesh m = unit_square();
    for (int r = 0; r < 2; ++r) m = uniform_refine(m);
    auto w = linear_field(m, 0.3, -0.7, 1.1, 0.25, {2.0, -3.0});
    auto g = displacement_gradients(m, w);
    for (const auto& e : g) {
        CHECK(e.g[0][0] == doctest::Approx(0.3).epsilon(1e-13));
        CHECK(e.g[0][1] == doctest::Approx(-0.7).epsilon(1e-13));
        CHECK(e.g[1][0] == doctest::Approx(1.1).epsilon(1e-13));
        CHECK(e.g[1][1] == doctest::Approx(0.25).epsilon(1e-13));
    }
}

TEST_CASE("bulk energy of a uniform stretch matches the closed form") {
    TriMesh m = unit_square();
    m = uniform_refine(m);
    MaterialParams mat;
    const double d = 1e-3;
    auto w = linear_field(m, 0.0, 0.0, 0.0, d, {0.0, 0.0});
    // eps = diag(0, d): energy density 1/2 (lambda + 2 mu) d^2 over unit area
    double exact = 0.5 * (mat.lambda + 2.0 * mat.mu) * d * d;
    CHECK(bulk_energy(m, mat, w) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("interior stiffness rows annihilate linear fields") {
    // constant-strain patch test: K w must vanish at every interior dof
    TriMesh m = unit_square();
    for (int r = 0; r < 3; ++r) m = uniform_refine(m);
    MaterialParams mat;
    std::vector<double> lam(m.triangle_count(), mat.lambda);
    std::vector<double> mu(m.triangle_count(), mat.mu);
    auto K = elasticity_stiffness(m, lam, mu);

    std::set<int> boundary;
    for (const auto& be : m.boundary_edges) {
        boundary.insert(be.a);
        boundary.insert(be.b);
    }
    auto w = linear_field(m, 0.4, 0.9, -0.2, 0.6, {1.0, 1.0});
    Eigen::VectorXd x(2 * m.node_count());
    for (int i = 0; i < m.node_count(); ++i) {
        x[2 * i] = w[i][0];
        x[2 * i + 1] = w[i][1];
    }
    Eigen::VectorXd r = K * x;
    double scale = mat.lambda;
    for (int i = 0; i < m.node_count(); ++i) {
        if (boundary.count(i)) continue;
        CHECK(std::abs(r[2 * i]) / scale <= 1e-12);
        CHECK(std::abs(r[2 * i + 1]) / scale <= 1e-12);
    }
}

TEST_CASE("fully constrained stretch recovers the exact traction") {
    // every node of the two-triangle square lies on Top or Bottom, so the
    // solve returns the interpolated boundary data and the uniform field
    TriMesh m = unit_square();
    MaterialParams mat;
    const double d = 1e-3;
    DirichletBC bc;
    bc.top = {0.0, d};
    auto w = solve_displacement(m, mat, bc);
    for (int i = 0; i < m.node_count(); ++i) {
        CHECK(w[i][0] == doctest::Approx(0.0));
        CHECK(w[i][1] == doctest::Approx(d * m.nodes[i][1]).epsilon(1e-13));
    }
    Vec2 tau = boundary_force(m, mat, w);
    CHECK(tau[0] == doctest::Approx(0.0).scale((mat.lambda + 2 * mat.mu) * d));
    CHECK(tau[1] == doctest::Approx((mat.lambda + 2.0 * mat.mu) * d).epsilon(1e-12));
}

TEST_CASE("top and bottom reactions balance on a refined square") {
    TriMesh m = unit_square();
    for (int r = 0; r < 3; ++r) m = uniform_refine(m);
    MaterialParams mat;
    DirichletBC bc;
    bc.top = {0.0, 2e-3};
    auto w = solve_displacement(m, mat, bc);
    CHECK(bulk_energy(m, mat, w) > 0.0);
    Vec2 top = boundary_force_on(m, mat, w, BoundaryTag::Top);
    Vec2 bot = boundary_force_on(m, mat, w, BoundaryTag::Bottom);
    double scale = std::abs(top[1]);
    CHECK(std::abs(top[0] + bot[0]) / scale <= 1e-10);
    CHECK(std::abs(top[1] + bot[1]) / scale <= 1e-10);
    CHECK(top[1] > 0.0);
}
