#ifndef FRACSHAPE_OUTPUT_HPP
#define FRACSHAPE_OUTPUT_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracshape/mesh.hpp"
#include "fracshape/optimizer.hpp"

namespace fracshape {

// steps.csv: one row per StepRecord, full double precision, LF endings.
void write_step_csv(const std::vector<StepRecord>& records, const std::string& path);

// Legacy VTK ASCII snapshot with displacement/deformation vectors, the
// Eikonal field and per-cell quality.
void write_snapshot(const TriMesh& mesh, const NodalVectorField& w,
                    const NodalVectorField& V, const NodalScalarField& phi,
                    const std::string& path);

// key=value echo of the resolved configuration plus the onset displacement.
void write_summary(const std::vector<std::pair<std::string, std::string>>& entries,
                   const std::string& path);

std::string format_double(double v);

}  // namespace fracshape

#endif
