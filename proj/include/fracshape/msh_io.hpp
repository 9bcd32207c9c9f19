#ifndef FRACSHAPE_MSH_IO_HPP
#define FRACSHAPE_MSH_IO_HPP

#include <istream>

#include "fracshape/mesh.hpp"

namespace fracshape {

// Reads an MSH 2.2 ASCII mesh with 2-node lines and 3-node triangles.
// Physical names must be bottom/top/left/right/crack (case-insensitive);
// the crack polyline is rebuilt by chaining the Crack-tagged edges.
TriMesh read_msh(std::istream& in);

}  // namespace fracshape

#endif
