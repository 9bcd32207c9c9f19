#ifndef FRACSHAPE_SHAPEGRAD_HPP
#define FRACSHAPE_SHAPEGRAD_HPP

#include "fracshape/fem.hpp"
#include "fracshape/mesh.hpp"

namespace fracshape {

// Nodal covector g with g . W = dJ(u)[W] for any P1 field W.
struct ShapeDerivative {
    NodalVectorField g;

    double pair(const NodalVectorField& W) const {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += dot(g[i], W[i]);
        return s;
    }
};

// Volume terms of the shape derivative of the elastic energy plus the
// curve terms of the fracture-length and slit-area penalties. The curve
// terms are assembled as the exact derivatives of the discrete length and
// discrete shoelace area, so that g . W matches a finite difference of the
// discrete objective to solver precision.
ShapeDerivative assemble_shape_derivative(const TriMesh& mesh, const MaterialParams& mat,
                                          const NodalVectorField& w);

// Options of the Steklov-Poincare deformation equation: a pseudo-elastic
// bilinear form with mu graded from mu_tip at the crack tip down to mu_far
// at distance >= grade_radius, lambda = 0.
struct DeformationOptions {
    double mu_tip = 1.0;
    double mu_far = 0.1;
    double grade_radius = 0.1;
    double lambda = 0.0;
};

// Solves a(V, W) = -g . W over fields vanishing on the outer boundary;
// the returned V satisfies g . V = -a(V, V) <= 0.
NodalVectorField solve_deformation_field(const TriMesh& mesh, const ShapeDerivative& g,
                                         const DeformationOptions& opts = {});

struct EikonalResult {
    NodalScalarField phi;
    bool converged = false;
    int iterations = 0;
    double eps_stab = 0.0;
};

// Viscosity-regularized Eikonal problem -eps*Lap(phi) + |grad phi| = 1,
// phi = 0 on crack nodes, solved by damped Picard iteration on the
// linearized advection-diffusion form. A previous solution on the same
// mesh topology can be passed as warm start.
EikonalResult solve_eikonal(const TriMesh& mesh, const NodalScalarField* warm_start = nullptr);

struct ExtendedNormals {
    NodalVectorField N;          // unit, or zero where flagged
    std::vector<char> flagged;   // nodal gradient below threshold
};

// N = -grad(phi)/|grad(phi)| from area-weighted nodal gradient averaging;
// aligns with the outward curve normal on the crack.
ExtendedNormals extended_normals(const TriMesh& mesh, const NodalScalarField& phi);

// Zeroes V wherever <V, N> > 0; flagged (zero-N) nodes are never touched.
NodalVectorField project_irreversibility(const NodalVectorField& V,
                                         const NodalVectorField& N);

}  // namespace fracshape

#endif
