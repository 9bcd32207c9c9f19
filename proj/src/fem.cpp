#include "fracshape/fem.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <set>

#include "fracshape/errors.hpp"

namespace fracshape {

void MaterialParams::validate() const {
    if (!(mu > 0.0)) throw ValidationError("mu must be positive");
    if (!(lambda + mu > 0.0)) throw ValidationError("lambda + mu must be positive");
    if (G_c < 0.0) throw ValidationError("G_c must be non-negative");
    if (nu_reg < 0.0) throw ValidationError("nu must be non-negative");
}

namespace {

// Constant P1 shape-function gradients on a triangle; returns area.
double shape_gradients(const TriMesh& mesh, int t, Vec2 grad[3]) {
    const Vec2& a = mesh.nodes[mesh.triangles[t][0]];
    const Vec2& b = mesh.nodes[mesh.triangles[t][1]];
    const Vec2& c = mesh.nodes[mesh.triangles[t][2]];
    double twoA = cross(b - a, c - a);
    grad[0] = {(b[1] - c[1]) / twoA, (c[0] - b[0]) / twoA};
    grad[1] = {(c[1] - a[1]) / twoA, (a[0] - c[0]) / twoA};
    grad[2] = {(a[1] - b[1]) / twoA, (b[0] - a[0]) / twoA};
    return 0.5 * twoA;
}

}  // namespace

Eigen::SparseMatrix<double> elasticity_stiffness(const TriMesh& mesh,
                                                 const std::vector<double>& lambda_t,
                                                 const std::vector<double>& mu_t) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.triangle_count() * 36);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 g[3];
        double area = shape_gradients(mesh, t, g);
        double lam = lambda_t[t], mu = mu_t[t];
        // B maps the 6 nodal dofs to (eps_xx, eps_yy, 2 eps_xy)
        double B[3][6] = {};
        for (int i = 0; i < 3; ++i) {
            B[0][2 * i] = g[i][0];
            B[1][2 * i + 1] = g[i][1];
            B[2][2 * i] = g[i][1];
            B[2][2 * i + 1] = g[i][0];
        }
        // C for sigma = 2 mu eps + lam tr(eps) I, engineering shear strain
        double C[3][3] = {{lam + 2 * mu, lam, 0}, {lam, lam + 2 * mu, 0}, {0, 0, mu}};
        double Ke[6][6];
        for (int r = 0; r < 6; ++r)
            for (int s = 0; s < 6; ++s) {
                double v = 0.0;
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) v += B[p][r] * C[p][q] * B[q][s];
                Ke[r][s] = v * area;
            }
        int dof[6];
        for (int i = 0; i < 3; ++i) {
            dof[2 * i] = 2 * mesh.triangles[t][i];
            dof[2 * i + 1] = 2 * mesh.triangles[t][i] + 1;
        }
        for (int r = 0; r < 6; ++r)
            for (int s = 0; s < 6; ++s)
                if (Ke[r][s] != 0.0) trip.emplace_back(dof[r], dof[s], Ke[r][s]);
    }
    Eigen::SparseMatrix<double> K(2 * n, 2 * n);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

std::vector<int> tagged_nodes(const TriMesh& mesh, BoundaryTag tag) {
    std::set<int> s;
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == tag) {
            s.insert(e.a);
            s.insert(e.b);
        }
    return {s.begin(), s.end()};
}

LinearSystem assemble_elasticity(const TriMesh& mesh, const MaterialParams& mat,
                                 const DirichletBC& bc) {
    std::vector<double> lam(mesh.triangle_count(), mat.lambda);
    std::vector<double> mu(mesh.triangle_count(), mat.mu);
    LinearSystem sys;
    sys.K = elasticity_stiffness(mesh, lam, mu);
    sys.rhs = Eigen::VectorXd::Zero(2 * mesh.node_count());

    std::vector<std::pair<int, double>> cons;
    for (int v : tagged_nodes(mesh, BoundaryTag::Bottom)) {
        cons.emplace_back(2 * v, bc.bottom[0]);
        cons.emplace_back(2 * v + 1, bc.bottom[1]);
    }
    for (int v : tagged_nodes(mesh, BoundaryTag::Top)) {
        cons.emplace_back(2 * v, bc.top[0]);
        cons.emplace_back(2 * v + 1, bc.top[1]);
    }
    std::sort(cons.begin(), cons.end());
    cons.erase(std::unique(cons.begin(), cons.end()), cons.end());
    sys.constrained_value.resize(cons.size());
    for (std::size_t i = 0; i < cons.size(); ++i) {
        sys.constrained_dof.push_back(cons[i].first);
        sys.constrained_value[static_cast<Eigen::Index>(i)] = cons[i].second;
    }
    return sys;
}

Eigen::VectorXd solve_constrained(const Eigen::SparseMatrix<double>& K,
                                  const Eigen::VectorXd& b,
                                  const std::vector<int>& fixed_dof,
                                  const Eigen::VectorXd& fixed_val) {
    const Eigen::Index n = K.rows();
    if (fixed_dof.empty()) throw SingularSystem("no Dirichlet dofs");
    std::vector<int> map(n, -1);  // dof -> free index
    std::vector<char> is_fixed(n, 0);
    for (int d : fixed_dof) is_fixed[d] = 1;
    Eigen::Index nf = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!is_fixed[i]) map[i] = static_cast<int>(nf++);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < fixed_dof.size(); ++i)
        full[fixed_dof[i]] = fixed_val[static_cast<Eigen::Index>(i)];

    // rhs correction b_f - K_fc x_c on the free set
    Eigen::VectorXd corr = b - K * full;
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index col = 0; col < K.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it)
            if (!is_fixed[it.row()] && !is_fixed[it.col()])
                trip.emplace_back(map[it.row()], map[it.col()], it.value());
    Eigen::SparseMatrix<double> Kff(nf, nf);
    Kff.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd bf(nf);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!is_fixed[i]) bf[map[i]] = corr[i];

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Kff);
    if (solver.info() != Eigen::Success)
        throw SingularSystem("Cholesky factorization failed");
    Eigen::VectorXd xf = solver.solve(bf);
    if (solver.info() != Eigen::Success)
        throw SolverDivergence("sparse solve failed");

    for (Eigen::Index i = 0; i < n; ++i)
        if (!is_fixed[i]) full[i] = xf[map[i]];
    return full;
}

NodalVectorField solve_displacement(const TriMesh& mesh, const MaterialParams& mat,
                                    const DirichletBC& bc) {
    LinearSystem sys = assemble_elasticity(mesh, mat, bc);
    if (sys.constrained_dof.empty())
        throw SingularSystem("no Dirichlet boundary present");
    Eigen::VectorXd x =
        solve_constrained(sys.K, sys.rhs, sys.constrained_dof, sys.constrained_value);
    NodalVectorField w(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) w[i] = {x[2 * i], x[2 * i + 1]};
    return w;
}

std::vector<ElementGradient> displacement_gradients(const TriMesh& mesh,
                                                    const NodalVectorField& w) {
    std::vector<ElementGradient> out(mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 g[3];
        shape_gradients(mesh, t, g);
        ElementGradient e{};
        for (int i = 0; i < 3; ++i) {
            const Vec2& wi = w[mesh.triangles[t][i]];
            e.g[0][0] += wi[0] * g[i][0];
            e.g[0][1] += wi[0] * g[i][1];
            e.g[1][0] += wi[1] * g[i][0];
            e.g[1][1] += wi[1] * g[i][1];
        }
        out[t] = e;
    }
    return out;
}

double bulk_energy(const TriMesh& mesh, const MaterialParams& mat,
                   const NodalVectorField& w) {
    auto grads = displacement_gradients(mesh, w);
    double energy = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& g = grads[t].g;
        double exx = g[0][0], eyy = g[1][1], exy = 0.5 * (g[0][1] + g[1][0]);
        double tr = exx + eyy;
        double sxx = 2 * mat.mu * exx + mat.lambda * tr;
        double syy = 2 * mat.mu * eyy + mat.lambda * tr;
        double sxy = 2 * mat.mu * exy;
        energy += 0.5 * (sxx * exx + syy * eyy + 2 * sxy * exy) * mesh.signed_area(t);
    }
    return energy;
}

Vec2 boundary_force_on(const TriMesh& mesh, const MaterialParams& mat,
                       const NodalVectorField& w, BoundaryTag tag) {
    std::vector<double> lam(mesh.triangle_count(), mat.lambda);
    std::vector<double> mu(mesh.triangle_count(), mat.mu);
    Eigen::SparseMatrix<double> K = elasticity_stiffness(mesh, lam, mu);
    Eigen::VectorXd x(2 * mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) {
        x[2 * i] = w[i][0];
        x[2 * i + 1] = w[i][1];
    }
    Eigen::VectorXd r = K * x;
    Vec2 tau{0.0, 0.0};
    for (int v : tagged_nodes(mesh, tag)) {
        tau[0] += r[2 * v];
        tau[1] += r[2 * v + 1];
    }
    return tau;
}

Vec2 boundary_force(const TriMesh& mesh, const MaterialParams& mat,
                    const NodalVectorField& w) {
    return boundary_force_on(mesh, mat, w, BoundaryTag::Top);
}

}  // namespace fracshape
