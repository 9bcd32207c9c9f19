#ifndef FRACSHAPE_MESH_HPP
#define FRACSHAPE_MESH_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace fracshape {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(const Vec2& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1]); }

enum class BoundaryTag : std::uint8_t { Bottom, Top, Left, Right, Crack };

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::Bottom;
};

// Per-node 2-vector field (displacement, deformation, extended normal).
using NodalVectorField = std::vector<Vec2>;
// Per-node scalar field (Eikonal distance).
using NodalScalarField = std::vector<double>;

// Triangulated computational domain with tagged boundary and the fracture
// curve stored as an ordered node polyline from P1 to P2.
struct TriMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // CCW
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<int> crack_polyline;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    double signed_area(int t) const {
        const Vec2& a = nodes[triangles[t][0]];
        const Vec2& b = nodes[triangles[t][1]];
        const Vec2& c = nodes[triangles[t][2]];
        return 0.5 * cross(b - a, c - a);
    }
};

// Per-crack-node geometry of the fracture curve. Normals point out of the
// material domain (into the slit); curvature is signed so that the rounded
// tip of the initial notch carries negative values.
struct CurveGeometry {
    std::vector<Vec2> normal;          // unit, per crack node
    std::vector<double> curvature;     // 1/mm, per crack node
    std::vector<double> segment_length;  // mm, per polyline segment
    // Turning angle per crack node (rad); curvature = -angle / node weight,
    // node weight = half the sum of adjacent segment lengths.
    std::vector<double> turning_angle;
    std::vector<double> node_weight;
};

// Sum of Euclidean segment lengths of the crack polyline.
double crack_length(const TriMesh& mesh);

// Nodal normals, signed curvature and segment lengths of the crack polyline.
// Throws DegenerateSegment if a segment is shorter than 1e-14.
CurveGeometry curve_geometry(const TriMesh& mesh);

// min over triangles of 2*r_in/r_circ (1 = equilateral, -> 0 degenerate).
double mesh_quality(const TriMesh& mesh);
double triangle_quality(const Vec2& a, const Vec2& b, const Vec2& c);

// Moves every node by alpha*V. Connectivity and tags are untouched.
// Throws ElementInversion if a signed area becomes non-positive.
TriMesh deform(const TriMesh& mesh, const NodalVectorField& V, double alpha);

// Midpoint subdivision (1:4). Boundary midpoints inherit the edge tag and
// the crack polyline is re-threaded through the new midpoints.
TriMesh uniform_refine(const TriMesh& mesh);

// Checks all TriMesh invariants, throws std::runtime_error on violation.
void check_mesh(const TriMesh& mesh);

// Signed area of the whole triangulation (sum over elements).
double domain_area(const TriMesh& mesh);

// Shoelace area of the slit: crack polyline closed by the chord P2->P1.
double slit_area(const TriMesh& mesh);

double mean_edge_length(const TriMesh& mesh);
double edge_length_quantile(const TriMesh& mesh, double q);

// Index (into nodes) of the crack node with minimal x coordinate.
int crack_tip_node(const TriMesh& mesh);

}  // namespace fracshape

#endif
