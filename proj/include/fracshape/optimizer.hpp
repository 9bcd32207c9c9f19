#ifndef FRACSHAPE_OPTIMIZER_HPP
#define FRACSHAPE_OPTIMIZER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "fracshape/fem.hpp"
#include "fracshape/mesh.hpp"
#include "fracshape/shapegrad.hpp"

namespace fracshape {

struct DescentOptions {
    double step_size = 1e-2;
    double stop_tol = 1e-8;           // on crack-length change, mm
    int max_inner_iterations = 5000;
    double quality_threshold = 0.2;
    double h_far = 0.05;              // remesh sizing
    double h_tip = 0.005;
    DeformationOptions deformation;

    void validate() const;
};

struct LoadProgram {
    Vec2 direction{0.0, 1.0};     // unit displacement pattern
    double coarse_increment = 1e-3;
    double coarse_until = 4e-3;
    double fine_increment = 1e-5;
    double max_displacement = 6e-3;

    void validate() const;
};

struct StepRecord {
    double displacement = 0.0;  // applied magnitude, mm
    Vec2 tau{0.0, 0.0};         // N/mm
    double E_bulk = 0.0;
    double E_fracture = 0.0;
    double J_reg = 0.0;
    double crack_length = 0.0;
    int node_count = 0;
    int triangle_count = 0;
    int inner_iterations = 0;
    int remesh_count = 0;
};

struct ObjectiveValue {
    double J = 0.0;
    double E_bulk = 0.0;
    double E_fracture = 0.0;
    double J_reg = 0.0;
};

// J = E_bulk + 1/2 G_c |u| + nu * slit area.
ObjectiveValue evaluate_objective(const TriMesh& mesh, const MaterialParams& mat,
                                  const NodalVectorField& w);

struct InnerReport {
    int iterations = 0;
    int remeshes = 0;
    bool converged = false;
    bool stalled = false;
    double crack_length_change = 0.0;
};

// Gradient descent at fixed load: solve state, assemble dJ, solve the
// deformation field, extend normals, project, deform; stops when the
// crack-length change per iteration drops below stop_tol.
std::pair<TriMesh, InnerReport> inner_descent(const TriMesh& mesh, const MaterialParams& mat,
                                              const DirichletBC& bc, const DescentOptions& opts);

using StepCallback =
    std::function<void(int step, const StepRecord& rec, const TriMesh& mesh)>;

// Quasi-static load stepping: coarse increments up to coarse_until, fine
// after; each level continues from the previous converged mesh. Stops at
// max_displacement or once the crack reaches the far (left) boundary.
std::vector<StepRecord> run_load_program(const TriMesh& initial, const MaterialParams& mat,
                                         const LoadProgram& program, const DescentOptions& opts,
                                         const StepCallback& callback = nullptr);

// Smallest applied displacement whose record grew the crack by at least
// growth_threshold over the previous record.
std::optional<double> detect_onset(const std::vector<StepRecord>& records,
                                   double growth_threshold = 0.01);

}  // namespace fracshape

#endif
