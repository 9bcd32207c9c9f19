#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fracshape/config.hpp"
#include "fracshape/errors.hpp"
#include "fracshape/msh_io.hpp"
#include "fracshape/optimizer.hpp"
#include "fracshape/output.hpp"
#include "fracshape/shapegrad.hpp"
#include "fracshape/triangulate.hpp"

namespace {

void usage() {
    std::fprintf(stderr,
                 "usage: fracshape [--benchmark tension|shear|custom] [--config path]\n"
                 "                 [--mesh path.msh] [--out dir] [--gc v] [--nu v]\n"
                 "                 [--step-size a] [--max-displacement mm]\n"
                 "                 [--snapshot-every k] [key-specific overrides]\n");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fracshape;
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args)
        if (a == "-h" || a == "--help") {
            usage();
            return 0;
        }

    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "fracshape: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "fracshape: %s\n", e.what());
        return 2;
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);

        TriMesh mesh;
        if (cfg.mesh_path.empty()) {
            mesh = generate_notched_square(cfg.descent.h_far, cfg.descent.h_tip);
        } else {
            std::ifstream in(cfg.mesh_path);
            if (!in) throw IoError("cannot open mesh file '" + cfg.mesh_path + "'");
            mesh = read_msh(in);
        }
        std::printf("initial mesh: %d nodes, %d triangles, quality %.3f\n",
                    mesh.node_count(), mesh.triangle_count(), mesh_quality(mesh));

        int stalled_steps = 0;
        TriMesh last_mesh = mesh;
        int last_step = -1;
        bool last_written = false;

        auto emit_snapshot = [&](int step, double displacement, const TriMesh& m) {
            DirichletBC bc;
            bc.top = displacement * cfg.program.direction;
            NodalVectorField w = solve_displacement(m, cfg.material, bc);
            ShapeDerivative g = assemble_shape_derivative(m, cfg.material, w);
            NodalVectorField V = solve_deformation_field(m, g, cfg.descent.deformation);
            EikonalResult eik = solve_eikonal(m);
            write_snapshot(m, w, V, eik.phi,
                           cfg.out_dir + "/snapshot_" + std::to_string(step) + ".vtk");
        };

        std::vector<StepRecord> records;
        auto callback = [&](int step, const StepRecord& rec, const TriMesh& m) {
            if (rec.inner_iterations >= cfg.descent.max_inner_iterations) ++stalled_steps;
            std::printf("step %4d  disp %.6g  tau_y %.6g  E_bulk %.6g  crack %.8g  "
                        "(%d nodes, %d inner, %d remesh)\n",
                        step, rec.displacement, rec.tau[1], rec.E_bulk, rec.crack_length,
                        m.node_count(), rec.inner_iterations, rec.remesh_count);
            std::fflush(stdout);
            last_mesh = m;
            last_step = step;
            last_written = step % cfg.snapshot_every == 0;
            if (last_written) emit_snapshot(step, rec.displacement, m);
        };
        records = run_load_program(mesh, cfg.material, cfg.program, cfg.descent, callback);

        if (records.empty()) {
            std::fprintf(stderr, "fracshape: load program produced no steps\n");
            return 1;
        }
        write_step_csv(records, cfg.out_dir + "/steps.csv");

        if (!last_written && last_step >= 0)
            emit_snapshot(last_step, records.back().displacement, last_mesh);

        auto onset = detect_onset(records);
        auto entries = config_entries(cfg);
        entries.emplace_back("steps", std::to_string(records.size()));
        entries.emplace_back("stalled_steps", std::to_string(stalled_steps));
        entries.emplace_back("onset_displacement",
                             onset ? format_double(*onset) : std::string("none"));
        entries.emplace_back("final_crack_length",
                             format_double(records.back().crack_length));
        write_summary(entries, cfg.out_dir + "/run.summary");

        std::printf("done: %zu steps, %d stalled, onset %s\n", records.size(), stalled_steps,
                    onset ? format_double(*onset).c_str() : "none");
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fracshape: %s\n", e.what());
        return 1;
    }
}
