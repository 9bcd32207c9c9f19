#ifndef FRACSHAPE_CONFIG_HPP
#define FRACSHAPE_CONFIG_HPP

#include <string>
#include <vector>

#include "fracshape/fem.hpp"
#include "fracshape/optimizer.hpp"

namespace fracshape {

enum class Benchmark { Tension, Shear, Custom };

struct RunConfig {
    Benchmark benchmark = Benchmark::Tension;
    MaterialParams material;
    DescentOptions descent;
    LoadProgram program;
    std::string mesh_path;  // empty: generate the notched square
    std::string out_dir = ".";
    int snapshot_every = 50;

    void validate() const;
};

// Resolves benchmark preset, then config file keys, then flag overrides.
// Throws UsageError for unknown flags/keys and ValidationError for
// invariant violations.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::string& config_text = "");

const char* benchmark_name(Benchmark b);

// Resolved-config echo used by run.summary.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

}  // namespace fracshape

#endif
