#include "fracshape/shapegrad.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "fracshape/errors.hpp"

namespace fracshape {

namespace {

double tri_area_and_grads(const TriMesh& mesh, int t, Vec2 grad[3]) {
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

ShapeDerivative assemble_shape_derivative(const TriMesh& mesh, const MaterialParams& mat,
                                          const NodalVectorField& w) {
    ShapeDerivative out;
    out.g.assign(mesh.nodes.size(), {0.0, 0.0});

    // Volume terms: for W = phi_i e_d,
    //   dJ += [ -(grad w  e_d ox grad phi_i) : sigma
    //           + (grad phi_i)_d * 1/2 sigma:eps ] * area
    auto grads_w = displacement_gradients(mesh, w);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 g[3];
        double area = tri_area_and_grads(mesh, t, g);
        const auto& gw = grads_w[t].g;
        double exx = gw[0][0], eyy = gw[1][1], exy = 0.5 * (gw[0][1] + gw[1][0]);
        double tr = exx + eyy;
        double s[2][2] = {{2 * mat.mu * exx + mat.lambda * tr, 2 * mat.mu * exy},
                          {2 * mat.mu * exy, 2 * mat.mu * eyy + mat.lambda * tr}};
        double half_se = 0.5 * (s[0][0] * exx + s[1][1] * eyy + 2 * s[0][1] * exy);
        for (int i = 0; i < 3; ++i) {
            int node = mesh.triangles[t][i];
            for (int d = 0; d < 2; ++d) {
                // (grad w grad W)_{mj} = dw_m/dx_d * dphi_i/dx_j
                double term1 = 0.0;
                for (int m = 0; m < 2; ++m)
                    for (int j = 0; j < 2; ++j) term1 += gw[m][d] * g[i][j] * s[m][j];
                double val = (-term1 + g[i][d] * half_se) * area;
                out.g[node][d] += val;
            }
        }
    }

    // Fracture-length term: exact gradient of 1/2 G_c * sum |segment|.
    const auto& poly = mesh.crack_polyline;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Vec2 d = mesh.nodes[poly[i + 1]] - mesh.nodes[poly[i]];
        double len = norm(d);
        if (len < 1e-14) throw DegenerateSegment("crack segment in shape derivative");
        Vec2 t = (1.0 / len) * d;
        out.g[poly[i]] = out.g[poly[i]] - 0.5 * mat.G_c * t;
        out.g[poly[i + 1]] = out.g[poly[i + 1]] + 0.5 * mat.G_c * t;
    }

    // Slit-area term: exact gradient of nu * |shoelace area| of the crack
    // polyline closed by the chord P2 -> P1.
    if (n >= 3 && mat.nu_reg != 0.0) {
        double twice = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = mesh.nodes[poly[i]];
            const Vec2& q = mesh.nodes[poly[(i + 1) % n]];
            twice += cross(p, q);
        }
        double sgn = twice >= 0.0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& prev = mesh.nodes[poly[(i + n - 1) % n]];
            const Vec2& next = mesh.nodes[poly[(i + 1) % n]];
            out.g[poly[i]][0] += sgn * mat.nu_reg * 0.5 * (next[1] - prev[1]);
            out.g[poly[i]][1] += sgn * mat.nu_reg * 0.5 * (prev[0] - next[0]);
        }
    }
    return out;
}

NodalVectorField solve_deformation_field(const TriMesh& mesh, const ShapeDerivative& g,
                                         const DeformationOptions& opts) {
    const int n = mesh.node_count();
    Vec2 tip = mesh.nodes[crack_tip_node(mesh)];
    std::vector<double> lam(mesh.triangle_count(), opts.lambda);
    std::vector<double> mu(mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 ctr = (1.0 / 3.0) * (mesh.nodes[mesh.triangles[t][0]] +
                                  mesh.nodes[mesh.triangles[t][1]] +
                                  mesh.nodes[mesh.triangles[t][2]]);
        double f = std::clamp(norm(ctr - tip) / opts.grade_radius, 0.0, 1.0);
        mu[t] = opts.mu_tip + (opts.mu_far - opts.mu_tip) * f;
    }
    Eigen::SparseMatrix<double> K = elasticity_stiffness(mesh, lam, mu);

    std::vector<int> fixed;
    for (BoundaryTag tag : {BoundaryTag::Bottom, BoundaryTag::Top, BoundaryTag::Left,
                            BoundaryTag::Right})
        for (int v : tagged_nodes(mesh, tag)) {
            fixed.push_back(2 * v);
            fixed.push_back(2 * v + 1);
        }
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
    if (fixed.empty()) throw SingularSystem("no outer boundary to pin the deformation field");

    Eigen::VectorXd rhs(2 * n);
    for (int i = 0; i < n; ++i) {
        rhs[2 * i] = -g.g[i][0];
        rhs[2 * i + 1] = -g.g[i][1];
    }
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fixed.size()));
    Eigen::VectorXd x = solve_constrained(K, rhs, fixed, zeros);

    NodalVectorField V(n);
    for (int i = 0; i < n; ++i) V[i] = {x[2 * i], x[2 * i + 1]};
    return V;
}

EikonalResult solve_eikonal(const TriMesh& mesh, const NodalScalarField* warm_start) {
    const int n = mesh.node_count();
    EikonalResult res;
    // a low edge-length quantile rather than the mean: on graded meshes a
    // mean-sized viscosity over-diffuses the refined tip fan, and the
    // minimum is fragile against a single squashed element
    res.eps_stab = 2.0 * edge_length_quantile(mesh, 0.05);

    std::vector<char> fixed(n, 0);
    for (int v : mesh.crack_polyline) fixed[v] = 1;
    std::vector<int> free_map(n, -1);
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (!fixed[i]) free_map[i] = nf++;

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
    if (warm_start && static_cast<int>(warm_start->size()) == n)
        for (int i = 0; i < n; ++i) phi[i] = (*warm_start)[i];
    for (int i = 0; i < n; ++i)
        if (fixed[i]) phi[i] = 0.0;

    const double eps = res.eps_stab;
    const int max_iter = 200;
    const double damping = 0.5;
    int it = 0;
    for (; it < max_iter; ++it) {
        // linearized form: eps (grad phi, grad v) + (b . grad phi, v) = (1, v)
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            Vec2 g[3];
            double area = tri_area_and_grads(mesh, t, g);
            Vec2 gp{0.0, 0.0};
            for (int k = 0; k < 3; ++k)
                gp = gp + phi[mesh.triangles[t][k]] * g[k];
            double mag = norm(gp);
            Vec2 b = mag > 1e-12 ? (1.0 / mag) * gp : Vec2{0.0, 0.0};
            for (int i = 0; i < 3; ++i) {
                int ni = mesh.triangles[t][i];
                if (fixed[ni]) continue;
                int ri = free_map[ni];
                rhs[ri] += area / 3.0;
                for (int j = 0; j < 3; ++j) {
                    int nj = mesh.triangles[t][j];
                    double a_ij = eps * dot(g[i], g[j]) * area + dot(b, g[j]) * area / 3.0;
                    if (fixed[nj])
                        rhs[ri] -= a_ij * phi[nj];  // always zero here, kept for clarity
                    else
                        trip.emplace_back(ri, free_map[nj], a_ij);
                }
            }
        }
        Eigen::SparseMatrix<double> A(nf, nf);
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success)
            throw SolverDivergence("Eikonal linearization is singular");
        Eigen::VectorXd sol = lu.solve(rhs);

        double num = 0.0, den = 0.0;
        Eigen::VectorXd next = phi;
        for (int i = 0; i < n; ++i)
            if (!fixed[i]) {
                double updated = (1.0 - damping) * phi[i] + damping * sol[free_map[i]];
                num += (updated - phi[i]) * (updated - phi[i]);
                den += updated * updated;
                next[i] = updated;
            }
        phi = next;
        if (den > 0.0 && std::sqrt(num / den) <= 1e-8) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = it;
    res.phi.assign(n, 0.0);
    for (int i = 0; i < n; ++i) res.phi[i] = phi[i];
    return res;
}

ExtendedNormals extended_normals(const TriMesh& mesh, const NodalScalarField& phi) {
    const int n = mesh.node_count();
    ExtendedNormals out;
    out.N.assign(n, {0.0, 0.0});
    out.flagged.assign(n, 0);
    std::vector<Vec2> acc(n, {0.0, 0.0});
    std::vector<double> wsum(n, 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        Vec2 g[3];
        double area = tri_area_and_grads(mesh, t, g);
        Vec2 gp{0.0, 0.0};
        for (int k = 0; k < 3; ++k)
            gp = gp + phi[mesh.triangles[t][k]] * g[k];
        for (int k = 0; k < 3; ++k) {
            int v = mesh.triangles[t][k];
            acc[v] = acc[v] + area * gp;
            wsum[v] += area;
        }
    }
    for (int i = 0; i < n; ++i) {
        Vec2 avg = wsum[i] > 0.0 ? (1.0 / wsum[i]) * acc[i] : Vec2{0.0, 0.0};
        double mag = norm(avg);
        if (mag < 1e-10) {
            out.flagged[i] = 1;
            continue;
        }
        out.N[i] = (-1.0 / mag) * avg;
    }
    return out;
}

NodalVectorField project_irreversibility(const NodalVectorField& V,
                                         const NodalVectorField& N) {
    NodalVectorField out = V;
    for (std::size_t i = 0; i < V.size(); ++i)
        if (dot(V[i], N[i]) > 0.0) out[i] = {0.0, 0.0};
    return out;
}

}  // namespace fracshape
