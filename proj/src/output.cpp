#include "fracshape/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracshape/errors.hpp"

namespace fracshape {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// write-to-temp-then-rename so readers never see a partial file
void commit(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp);
        out << content;
        if (!out) throw IoError("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("rename failed for " + path);
}

}  // namespace

void write_step_csv(const std::vector<StepRecord>& records, const std::string& path) {
    std::ostringstream out;
    out << "step,displacement_mm,tau_x,tau_y,E_bulk,E_fracture,J_reg,"
           "crack_length_mm,nodes,triangles,inner_iters,remeshes\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const StepRecord& r = records[i];
        out << i << ',' << format_double(r.displacement) << ',' << format_double(r.tau[0])
            << ',' << format_double(r.tau[1]) << ',' << format_double(r.E_bulk) << ','
            << format_double(r.E_fracture) << ',' << format_double(r.J_reg) << ','
            << format_double(r.crack_length) << ',' << r.node_count << ','
            << r.triangle_count << ',' << r.inner_iterations << ',' << r.remesh_count
            << '\n';
    }
    commit(path, out.str());
}

void write_snapshot(const TriMesh& mesh, const NodalVectorField& w,
                    const NodalVectorField& V, const NodalScalarField& phi,
                    const std::string& path) {
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\n";
    out << "fracshape snapshot\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.node_count() << " double\n";
    for (const auto& p : mesh.nodes)
        out << format_double(p[0]) << ' ' << format_double(p[1]) << " 0\n";
    out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << mesh.triangle_count() << '\n';
    for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
    out << "POINT_DATA " << mesh.node_count() << '\n';
    out << "VECTORS displacement double\n";
    for (const auto& v : w) out << format_double(v[0]) << ' ' << format_double(v[1]) << " 0\n";
    out << "VECTORS deformation double\n";
    for (const auto& v : V) out << format_double(v[0]) << ' ' << format_double(v[1]) << " 0\n";
    out << "SCALARS phi double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : phi) out << format_double(v) << '\n';
    out << "CELL_DATA " << mesh.triangle_count() << '\n';
    out << "SCALARS quality double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tv = mesh.triangles[t];
        out << format_double(
                   triangle_quality(mesh.nodes[tv[0]], mesh.nodes[tv[1]], mesh.nodes[tv[2]]))
            << '\n';
    }
    commit(path, out.str());
}

void write_summary(const std::vector<std::pair<std::string, std::string>>& entries,
                   const std::string& path) {
    std::ostringstream out;
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
    commit(path, out.str());
}

}  // namespace fracshape
