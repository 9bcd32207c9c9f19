#ifndef FRACSHAPE_FEM_HPP
#define FRACSHAPE_FEM_HPP

#include <Eigen/Sparse>
#include <vector>

#include "fracshape/mesh.hpp"

namespace fracshape {

// Lame constants, fracture toughness and the volume-regularization weight.
// The volumetric force f is identically zero for all benchmarks.
struct MaterialParams {
    double lambda = 121.15e3;  // N/mm^2
    double mu = 80.77e3;       // N/mm^2
    double G_c = 2.7;          // N/mm
    double nu_reg = 1.0;       // N/mm^2

    void validate() const;
};

// Prescribed displacement on the top edge; the bottom edge is clamped.
struct DirichletBC {
    Vec2 top{0.0, 0.0};
    Vec2 bottom{0.0, 0.0};
};

// Assembled P1 system: dof 2*i holds x, 2*i+1 holds y of node i.
struct LinearSystem {
    Eigen::SparseMatrix<double> K;     // unconstrained stiffness
    Eigen::VectorXd rhs;               // zero for f = 0
    std::vector<int> constrained_dof;  // sorted
    Eigen::VectorXd constrained_value;  // aligned with constrained_dof
};

// Stiffness of int sigma(w):eps(v) dx over P1 vector fields, with the
// Dirichlet dof set taken from the Bottom/Top tagged boundary nodes.
LinearSystem assemble_elasticity(const TriMesh& mesh, const MaterialParams& mat,
                                 const DirichletBC& bc);

// Solves the state problem by symmetric elimination of the Dirichlet dofs
// and a sparse Cholesky factorization.
NodalVectorField solve_displacement(const TriMesh& mesh, const MaterialParams& mat,
                                    const DirichletBC& bc);

// 1/2 sigma(w):eps(w) integrated over the mesh (f = 0).
double bulk_energy(const TriMesh& mesh, const MaterialParams& mat,
                   const NodalVectorField& w);

// Reaction force on the Top boundary, recovered from the unconstrained
// stiffness residual at the Top nodes.
Vec2 boundary_force(const TriMesh& mesh, const MaterialParams& mat,
                    const NodalVectorField& w);
Vec2 boundary_force_on(const TriMesh& mesh, const MaterialParams& mat,
                       const NodalVectorField& w, BoundaryTag tag);

// Per-triangle displacement gradient (row-major d w_i / d x_j).
struct ElementGradient {
    double g[2][2];
};
std::vector<ElementGradient> displacement_gradients(const TriMesh& mesh,
                                                    const NodalVectorField& w);

// Nodes carrying a given boundary tag.
std::vector<int> tagged_nodes(const TriMesh& mesh, BoundaryTag tag);

// Generic helper shared with the shape-gradient module: stiffness of the
// elasticity form with per-triangle Lame coefficients.
Eigen::SparseMatrix<double> elasticity_stiffness(const TriMesh& mesh,
                                                 const std::vector<double>& lambda_t,
                                                 const std::vector<double>& mu_t);

// Solves K x = b with the given dofs eliminated symmetrically.
Eigen::VectorXd solve_constrained(const Eigen::SparseMatrix<double>& K,
                                  const Eigen::VectorXd& b,
                                  const std::vector<int>& fixed_dof,
                                  const Eigen::VectorXd& fixed_val);

}  // namespace fracshape

#endif
