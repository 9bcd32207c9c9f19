#include "fracshape/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <limits>

#include "fracshape/errors.hpp"
#include "fracshape/triangulate.hpp"

namespace fracshape {

void DescentOptions::validate() const {
    if (!(step_size > 0.0)) throw ValidationError("step_size must be positive");
    if (!(stop_tol > 0.0)) throw ValidationError("stop_tol must be positive");
    if (!(quality_threshold > 0.0 && quality_threshold < 1.0))
        throw ValidationError("quality_threshold must lie in (0,1)");
    if (max_inner_iterations < 1) throw ValidationError("max_inner_iterations must be >= 1");
}

void LoadProgram::validate() const {
    if (!(coarse_increment > 0.0) || !(fine_increment > 0.0))
        throw ValidationError("load increments must be positive");
    if (coarse_until > max_displacement + 1e-15)
        throw ValidationError("coarse_until must not exceed max_displacement");
}

ObjectiveValue evaluate_objective(const TriMesh& mesh, const MaterialParams& mat,
                                  const NodalVectorField& w) {
    ObjectiveValue v;
    v.E_bulk = bulk_energy(mesh, mat, w);
    v.E_fracture = 0.5 * mat.G_c * crack_length(mesh);
    v.J_reg = mat.nu_reg * slit_area(mesh);
    v.J = v.E_bulk + v.E_fracture + v.J_reg;
    return v;
}

namespace {

// Trust-region step control: the raw deformation field can be large against
// the local mesh size, so each nodal motion is clipped to a fraction of the
// shortest edge incident to that node. Clipping is per node (not a global
// rescale) so that large vectors in the bulk cannot throttle the motion of
// the crack front, and the local length scale keeps triangles from inverting
// where boundary nodes are bunched closer than the nominal resolution;
// scaling a nodal vector by a positive factor preserves both
// irreversibility guards.
void clip_nodal_motion(const TriMesh& mesh, NodalVectorField& V, double step_size) {
    // cap per node at 0.3x the smallest altitude of its incident triangles:
    // with every vertex of a triangle moving less than a third of its own
    // altitude the signed area cannot reach zero, so the clipped step can
    // never invert an element
    std::vector<double> min_alt(mesh.nodes.size(), std::numeric_limits<double>::max());
    for (const auto& t : mesh.triangles) {
        double area2 = std::abs(cross(mesh.nodes[t[1]] - mesh.nodes[t[0]],
                                      mesh.nodes[t[2]] - mesh.nodes[t[0]]));
        for (int k = 0; k < 3; ++k) {
            double opp = norm(mesh.nodes[t[(k + 2) % 3]] - mesh.nodes[t[(k + 1) % 3]]);
            if (opp > 0.0) min_alt[t[k]] = std::min(min_alt[t[k]], area2 / opp);
        }
    }
    if (std::getenv("FS_GLOBALCLIP")) {
        // one uniform scale for the whole field: the relative magnitudes of
        // the descent direction carry the physics (the tip must outrun the
        // faces), so nodes must not be slowed down individually
        double f = 1.0;
        for (std::size_t i = 0; i < V.size(); ++i) {
            double cap = 0.3 * min_alt[i];
            double m = norm(V[i]) * step_size;
            if (m > cap) f = std::min(f, cap / m);
        }
        if (f < 1.0)
            for (auto& v : V) v = f * v;
        return;
    }
    for (std::size_t i = 0; i < V.size(); ++i) {
        double cap = 0.3 * min_alt[i];
        double m = norm(V[i]) * step_size;
        if (m > cap) V[i] = (cap / m) * V[i];
    }
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = dot(d, d);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * d));
}

// The crack faces bound a void with no elements inside it, so element
// quality and inversion checks cannot stop opposite faces from passing
// through each other (which leaves a self-intersecting boundary no remesh
// can triangulate). Limit the component of each crack node's motion that
// approaches the nearest non-adjacent crack segment to a fraction of the
// current gap above a fixed floor, so opposite faces can press together but
// never pinch the void shut to machine precision (nearly touching
// constrained segments defeat the retriangulation); motion away from the
// opposite face is untouched.
void clip_face_approach(const TriMesh& mesh, NodalVectorField& V, double step_size,
                        double gap_floor) {
    const auto& poly = mesh.crack_polyline;
    const int n = static_cast<int>(poly.size());
    // cumulative arc length along the polyline, to tell genuine opposite-face
    // proximity (euclidean gap much smaller than separation along the curve,
    // as across a slit or inside a hairpin) from plain neighborhood on one
    // face (gap comparable to the arc separation); clamping the latter would
    // throttle tangential sliding and buckle the face
    std::vector<double> arc(n, 0.0);
    for (int k = 1; k < n; ++k)
        arc[k] = arc[k - 1] + norm(mesh.nodes[poly[k]] - mesh.nodes[poly[k - 1]]);
    for (int k = 0; k < n; ++k) {
        const Vec2 p = mesh.nodes[poly[k]];
        Vec2& v = V[poly[k]];
        for (int s = 0; s + 1 < n; ++s) {
            if (s == k - 1 || s == k) continue;  // segments containing node k
            const Vec2 a = mesh.nodes[poly[s]];
            const Vec2 b = mesh.nodes[poly[s + 1]];
            double gap = point_segment_distance(p, a, b);
            double arcsep = std::min(std::abs(arc[k] - arc[s]), std::abs(arc[k] - arc[s + 1]));
            if (gap >= 0.5 * arcsep) continue;  // same-face neighborhood
            if (gap <= 0.0) {
                v = {0.0, 0.0};
                break;
            }
            Vec2 e = b - a;
            double len2 = dot(e, e);
            double t = len2 > 0.0 ? std::clamp(dot(p - a, e) / len2, 0.0, 1.0) : 0.0;
            Vec2 dir = (1.0 / gap) * ((a + t * e) - p);
            double approach = dot(v, dir) * step_size;
            double allowed = 0.4 * std::max(0.0, gap - gap_floor);
            if (approach > allowed) v = v - ((approach - allowed) / step_size) * dir;
        }
    }
}

// Smallest opposite-face gap of the crack polyline in the given node
// coordinates: minimum node-to-segment distance over pairs whose euclidean
// gap is well below their arc-length separation (same filter as
// clip_face_approach, so plain neighbors on one face do not count).
double crack_min_gap(const std::vector<Vec2>& pts, const std::vector<int>& poly) {
    const int n = static_cast<int>(poly.size());
    std::vector<double> arc(n, 0.0);
    for (int k = 1; k < n; ++k)
        arc[k] = arc[k - 1] + norm(pts[poly[k]] - pts[poly[k - 1]]);
    double g = std::numeric_limits<double>::max();
    for (int k = 0; k < n; ++k)
        for (int s = 0; s + 1 < n; ++s) {
            if (s == k - 1 || s == k) continue;
            double gap = point_segment_distance(pts[poly[k]], pts[poly[s]], pts[poly[s + 1]]);
            double arcsep = std::min(std::abs(arc[k] - arc[s]), std::abs(arc[k] - arc[s + 1]));
            if (gap >= 0.5 * arcsep) continue;
            g = std::min(g, gap);
        }
    return g;
}

}  // namespace

std::pair<TriMesh, InnerReport> inner_descent(const TriMesh& initial, const MaterialParams& mat,
                                              const DirichletBC& bc, const DescentOptions& opts) {
    opts.validate();
    TriMesh mesh = initial;
    InnerReport rep;
    NodalScalarField warm_phi;
    double len_prev = crack_length(mesh);

    for (int iter = 0; iter < opts.max_inner_iterations; ++iter) {
        bool retried = false;
        bool accepted = false;
        if (mesh_quality(mesh) < opts.quality_threshold) {
            // heal the mesh before measuring anything on it: degenerate
            // elements shrink the trust region and pollute the gradient
            mesh = remesh(mesh, opts.h_far, opts.h_tip);
            ++rep.remeshes;
            warm_phi.clear();
        }
        for (;;) {
            NodalVectorField w = solve_displacement(mesh, mat, bc);
            const double J0 = evaluate_objective(mesh, mat, w).J;
            ShapeDerivative g = assemble_shape_derivative(mesh, mat, w);
            NodalVectorField V = solve_deformation_field(mesh, g, opts.deformation);
            const NodalScalarField* warm =
                warm_phi.size() == mesh.nodes.size() ? &warm_phi : nullptr;
            EikonalResult eik = solve_eikonal(mesh, warm);
            warm_phi = eik.phi;
            ExtendedNormals ext = extended_normals(mesh, eik.phi);
            if (std::getenv("FS_NORMALONLY")) {
                for (int vtx : mesh.crack_polyline) {
                    Vec2 nrm = ext.N[vtx];
                    V[vtx] = dot(V[vtx], nrm) * nrm;
                }
            }
            if (std::getenv("FS_OSC")) {
                // damp only mesh-scale oscillation of the motion along the
                // polyline: where consecutive second differences alternate in
                // sign the field is noise, not shape change, and noise folds
                // the curve; a smooth advance profile has vanishing second
                // differences and passes through untouched
                const auto& poly = mesh.crack_polyline;
                const std::size_t np = poly.size();
                for (int pass = 0; pass < 2 && np >= 4; ++pass) {
                    std::vector<Vec2> d2(np, Vec2{0.0, 0.0});
                    for (std::size_t k = 1; k + 1 < np; ++k)
                        d2[k] = V[poly[k - 1]] - 2.0 * V[poly[k]] + V[poly[k + 1]];
                    std::vector<Vec2> upd(np, Vec2{0.0, 0.0});
                    for (std::size_t k = 2; k + 2 < np; ++k)
                        if (dot(d2[k], d2[k - 1]) < 0.0 && dot(d2[k], d2[k + 1]) < 0.0)
                            upd[k] = 0.25 * d2[k];
                    for (std::size_t k = 0; k < np; ++k) V[poly[k]] = V[poly[k]] + upd[k];
                }
            } else if (!std::getenv("FS_NOSMOOTH")) {
            // smooth the motion along the polyline: node-to-node oscillation
            // in the assembled gradient grows mesh-scale wiggles that fold
            // the curve into cusps no retriangulation can repair
            {
                const auto& poly = mesh.crack_polyline;
                std::vector<Vec2> sm(poly.size());
                for (std::size_t k = 0; k < poly.size(); ++k) sm[k] = V[poly[k]];
                for (int pass = 0; pass < 2; ++pass) {
                    std::vector<Vec2> next = sm;
                    for (std::size_t k = 1; k + 1 < poly.size(); ++k)
                        next[k] = 0.25 * sm[k - 1] + 0.5 * sm[k] + 0.25 * sm[k + 1];
                    sm = next;
                }
                for (std::size_t k = 0; k < poly.size(); ++k) V[poly[k]] = sm[k];
            }
            }
            NodalVectorField Vp = project_irreversibility(V, ext.N);
            clip_nodal_motion(mesh, Vp, opts.step_size);
            clip_face_approach(mesh, Vp, opts.step_size, 0.2 * opts.h_tip);
            // A move can still fold the crack polyline onto itself inside
            // the void, which no element check sees and no remesh can undo
            // (boundary nodes are kept). Test the candidate boundary and
            // shrink the crack-node motion uniformly until it stays simple;
            // uniform shrinking keeps the applied motion smooth where
            // zeroing individual nodes would cut new corners into the curve.
            for (int guard = 0; guard < 16; ++guard) {
                std::vector<Vec2> moved = mesh.nodes;
                for (std::size_t i = 0; i < moved.size(); ++i)
                    moved[i] = moved[i] + opts.step_size * Vp[i];
                if (boundary_crossing_nodes(moved, mesh.boundary_edges).empty() &&
                    crack_min_gap(moved, mesh.crack_polyline) > 0.02 * opts.h_tip)
                    break;
                double f = guard + 1 < 16 ? 0.5 : 0.0;
                for (int v : mesh.crack_polyline) Vp[v] = f * Vp[v];
            }
            try {
                // accept the move only if it lowers the objective without
                // shortening the crack, backtracking otherwise: pre-onset the
                // optimum is "no motion", and without the objective test the
                // leftover tangential sliding of the clipped gradient ratchets
                // mesh-scale wiggles into the faces until the crack "grows"
                // without any physics. Irreversibility of the length is
                // enforced here on the candidate rather than by clamping the
                // direction node by node: nodal clamping strips only the
                // shortening half of mesh-scale oscillation and so inflates
                // the length change of the applied motion several-fold,
                // degrading the energy released per unit length grown below
                // the point of descent
                const double len_cur = crack_length(mesh);
                for (int bt = 0;; ++bt) {
                    TriMesh cand = deform(mesh, Vp, opts.step_size);
                    bool remeshed = false;
                    if (mesh_quality(cand) < opts.quality_threshold) {
                        // retriangulate before judging the move, so the
                        // objective sees the boundary change and not the
                        // element distortion the motion left behind
                        cand = remesh(cand, opts.h_far, opts.h_tip);
                        remeshed = true;
                    }
                    NodalVectorField wc = solve_displacement(cand, mat, bc);
                    if (std::getenv("FS_DEBUG")) {
                        auto oc = evaluate_objective(cand, mat, wc);
                        auto o0 = evaluate_objective(mesh, mat, w);
                        std::fprintf(stderr,
                                     "  bt=%d J0=%.10f Jc=%.10f dEb=%.3e dEf=%.3e dJr=%.3e rm=%d\n",
                                     bt, J0, oc.J, oc.E_bulk - o0.E_bulk,
                                     oc.E_fracture - o0.E_fracture, oc.J_reg - o0.J_reg,
                                     remeshed ? 1 : 0);
                    }
                    if (evaluate_objective(cand, mat, wc).J <
                            J0 - 1e-14 * std::abs(J0) &&
                        crack_length(cand) >= len_cur - 1e-12) {
                        mesh = std::move(cand);
                        accepted = true;
                        if (remeshed) {
                            ++rep.remeshes;
                            warm_phi.clear();
                        }
                        break;
                    }
                    if (bt == 3) break;
                    // scale the whole field: the interior part of the motion
                    // costs discrete strain energy quadratically in the step
                    // (mesh distortion) while the boundary release is linear,
                    // so shrinking everything recovers a descent step whenever
                    // the boundary move is energetically favorable
                    for (auto& vv : Vp) vv = 0.5 * vv;
                }
                break;
            } catch (const ElementInversion&) {
                if (retried) {
                    rep.stalled = true;
                    rep.iterations = iter;
                    rep.crack_length_change = crack_length(mesh) - len_prev;
                    return {mesh, rep};
                }
                mesh = remesh(mesh, opts.h_far, opts.h_tip);
                ++rep.remeshes;
                warm_phi.clear();
                retried = true;
            }
        }
        rep.iterations = iter + 1;
        if (!accepted) {
            rep.converged = true;
            break;
        }
        if (mesh_quality(mesh) < opts.quality_threshold) {
            mesh = remesh(mesh, opts.h_far, opts.h_tip);
            ++rep.remeshes;
            warm_phi.clear();
        }
        double len = crack_length(mesh);
        double change = std::abs(len - len_prev);
        len_prev = len;
        if (change < opts.stop_tol) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) rep.stalled = true;
    rep.crack_length_change = len_prev - crack_length(initial);
    return {mesh, rep};
}

std::vector<StepRecord> run_load_program(const TriMesh& initial, const MaterialParams& mat,
                                         const LoadProgram& program, const DescentOptions& opts,
                                         const StepCallback& callback) {
    program.validate();
    std::vector<StepRecord> records;
    TriMesh mesh = initial;
    double disp = 0.0;
    int step = 0;
    const double tiny = 1e-12;
    while (disp < program.max_displacement - tiny) {
        double inc = disp < program.coarse_until - tiny ? program.coarse_increment
                                                        : program.fine_increment;
        disp = std::min(disp + inc, program.max_displacement);
        DirichletBC bc;
        bc.top = disp * program.direction;

        auto [next, rep] = inner_descent(mesh, mat, bc, opts);
        mesh = next;

        NodalVectorField w = solve_displacement(mesh, mat, bc);
        ObjectiveValue obj = evaluate_objective(mesh, mat, w);
        StepRecord rec;
        rec.displacement = disp;
        rec.tau = boundary_force(mesh, mat, w);
        rec.E_bulk = obj.E_bulk;
        rec.E_fracture = obj.E_fracture;
        rec.J_reg = obj.J_reg;
        rec.crack_length = crack_length(mesh);
        rec.node_count = mesh.node_count();
        rec.triangle_count = mesh.triangle_count();
        rec.inner_iterations = rep.iterations;
        rec.remesh_count = rep.remeshes;
        records.push_back(rec);
        if (callback) callback(step, rec, mesh);
        ++step;

        // crack reached the far boundary
        double min_x = mesh.nodes[crack_tip_node(mesh)][0];
        if (min_x <= opts.h_tip) break;
    }
    return records;
}

std::optional<double> detect_onset(const std::vector<StepRecord>& records,
                                   double growth_threshold) {
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].crack_length - records[i - 1].crack_length >= growth_threshold)
            return records[i].displacement;
    return std::nullopt;
}

}  // namespace fracshape
