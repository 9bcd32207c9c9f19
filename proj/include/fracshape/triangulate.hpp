#ifndef FRACSHAPE_TRIANGULATE_HPP
#define FRACSHAPE_TRIANGULATE_HPP

#include <functional>
#include <vector>

#include "fracshape/mesh.hpp"

namespace fracshape {

// Target edge length as a function of position.
using SizingFn = std::function<double(const Vec2&)>;

// Linear grading from h_tip at `tip` to h_far at distance >= radius.
SizingFn graded_sizing(Vec2 tip, double h_tip, double h_far, double radius);

// Triangulates the polygonal region enclosed by the given tagged boundary
// edges (a closed loop over boundary_nodes). Boundary nodes are kept at
// their exact coordinates and come first in the output node numbering, in
// input order; interior nodes are generated to match the sizing field.
TriMesh triangulate_boundary(const std::vector<Vec2>& boundary_nodes,
                             const std::vector<BoundaryEdge>& boundary_edges,
                             const std::vector<int>& crack_polyline,
                             const SizingFn& sizing);

// Initial single-edge-notch geometry: unit square with a horizontal slit of
// half-width 0.01 from the right edge to a semicircular tip at (0.5, 0.5).
TriMesh generate_notched_square(double h_far, double h_tip);

// Re-triangulates the region bounded by the current tagged boundary keeping
// every boundary node fixed; sizing graded from the current crack tip.
TriMesh remesh(const TriMesh& mesh, double h_far, double h_tip);

// Node ids of all boundary edges that cross a non-adjacent boundary edge;
// empty when the boundary polygon is simple.
std::vector<int> boundary_crossing_nodes(const std::vector<Vec2>& pts,
                                         const std::vector<BoundaryEdge>& edges);

}  // namespace fracshape

#endif
