#include "fracshape/config.hpp"

#include <fstream>
#include <sstream>

#include "fracshape/errors.hpp"
#include "fracshape/output.hpp"

namespace fracshape {

namespace {

void apply_benchmark(RunConfig& cfg, const std::string& name) {
    if (name == "tension") {
        cfg.benchmark = Benchmark::Tension;
        cfg.material.nu_reg = 1.0;
        cfg.program.direction = {0.0, 1.0};
        cfg.program.coarse_increment = 1e-3;
        cfg.program.coarse_until = 4e-3;
        cfg.program.fine_increment = 1e-5;
        cfg.program.max_displacement = 6e-3;
    } else if (name == "shear") {
        cfg.benchmark = Benchmark::Shear;
        cfg.material.nu_reg = 10.0;
        cfg.program.direction = {-1.0, 0.0};
        cfg.program.coarse_increment = 1e-4;
        cfg.program.coarse_until = 8e-3;
        cfg.program.fine_increment = 1e-5;
        cfg.program.max_displacement = 2.22e-2;
    } else if (name == "custom") {
        cfg.benchmark = Benchmark::Custom;
    } else {
        throw UsageError("unknown benchmark '" + name + "'");
    }
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw UsageError("value of '" + key + "' is not a number: '" + value + "'");
    }
    if (used != value.size())
        throw UsageError("value of '" + key + "' is not a number: '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    double v = parse_number(key, value);
    if (v != static_cast<long long>(v))
        throw UsageError("value of '" + key + "' is not an integer: '" + value + "'");
    return static_cast<int>(v);
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "benchmark") apply_benchmark(cfg, value);
    else if (key == "gc") cfg.material.G_c = parse_number(key, value);
    else if (key == "nu") cfg.material.nu_reg = parse_number(key, value);
    else if (key == "lambda") cfg.material.lambda = parse_number(key, value);
    else if (key == "mu") cfg.material.mu = parse_number(key, value);
    else if (key == "step-size" || key == "step_size")
        cfg.descent.step_size = parse_number(key, value);
    else if (key == "stop-tol" || key == "stop_tol")
        cfg.descent.stop_tol = parse_number(key, value);
    else if (key == "max-inner-iterations" || key == "max_inner_iterations")
        cfg.descent.max_inner_iterations = parse_int(key, value);
    else if (key == "quality-threshold" || key == "quality_threshold")
        cfg.descent.quality_threshold = parse_number(key, value);
    else if (key == "h-far" || key == "h_far") cfg.descent.h_far = parse_number(key, value);
    else if (key == "h-tip" || key == "h_tip") cfg.descent.h_tip = parse_number(key, value);
    else if (key == "coarse-increment" || key == "coarse_increment")
        cfg.program.coarse_increment = parse_number(key, value);
    else if (key == "coarse-until" || key == "coarse_until")
        cfg.program.coarse_until = parse_number(key, value);
    else if (key == "fine-increment" || key == "fine_increment")
        cfg.program.fine_increment = parse_number(key, value);
    else if (key == "max-displacement" || key == "max_displacement")
        cfg.program.max_displacement = parse_number(key, value);
    else if (key == "direction-x" || key == "direction_x")
        cfg.program.direction[0] = parse_number(key, value);
    else if (key == "direction-y" || key == "direction_y")
        cfg.program.direction[1] = parse_number(key, value);
    else if (key == "mesh") cfg.mesh_path = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "snapshot-every" || key == "snapshot_every")
        cfg.snapshot_every = parse_int(key, value);
    else
        throw UsageError("unknown key '" + key + "'");
}

}  // namespace

void RunConfig::validate() const {
    material.validate();
    descent.validate();
    program.validate();
    if (snapshot_every < 1) throw ValidationError("snapshot cadence must be >= 1");
    if (!(descent.h_tip > 0.0) || !(descent.h_far >= descent.h_tip))
        throw ValidationError("need 0 < h_tip <= h_far");
}

RunConfig parse_config(const std::vector<std::string>& args, const std::string& config_text) {
    RunConfig cfg;
    apply_benchmark(cfg, "tension");

    // pass 1: benchmark preset first so flags can override it
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--benchmark") {
            if (i + 1 >= args.size()) throw UsageError("--benchmark needs a value");
            apply_benchmark(cfg, args[i + 1]);
        } else if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a value");
            config_path = args[i + 1];
        }
    }

    // injected text takes precedence over the file (test seam)
    std::string text = config_text;
    if (!config_path.empty() && text.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot read config file '" + config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line without '=': '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value = value.substr(1);
        apply_key(cfg, key, value);
    }

    // pass 2: flag overrides
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--benchmark" || a == "--config") {
            ++i;
            continue;
        }
        if (a.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + a + "'");
        if (i + 1 >= args.size()) throw UsageError("flag '" + a + "' needs a value");
        apply_key(cfg, a.substr(2), args[i + 1]);
        ++i;
    }

    cfg.validate();
    return cfg;
}

const char* benchmark_name(Benchmark b) {
    switch (b) {
        case Benchmark::Tension: return "tension";
        case Benchmark::Shear: return "shear";
        case Benchmark::Custom: return "custom";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("benchmark", benchmark_name(cfg.benchmark));
    e.emplace_back("lambda", format_double(cfg.material.lambda));
    e.emplace_back("mu", format_double(cfg.material.mu));
    e.emplace_back("gc", format_double(cfg.material.G_c));
    e.emplace_back("nu", format_double(cfg.material.nu_reg));
    e.emplace_back("step_size", format_double(cfg.descent.step_size));
    e.emplace_back("stop_tol", format_double(cfg.descent.stop_tol));
    e.emplace_back("max_inner_iterations", std::to_string(cfg.descent.max_inner_iterations));
    e.emplace_back("quality_threshold", format_double(cfg.descent.quality_threshold));
    e.emplace_back("h_far", format_double(cfg.descent.h_far));
    e.emplace_back("h_tip", format_double(cfg.descent.h_tip));
    e.emplace_back("direction_x", format_double(cfg.program.direction[0]));
    e.emplace_back("direction_y", format_double(cfg.program.direction[1]));
    e.emplace_back("coarse_increment", format_double(cfg.program.coarse_increment));
    e.emplace_back("coarse_until", format_double(cfg.program.coarse_until));
    e.emplace_back("fine_increment", format_double(cfg.program.fine_increment));
    e.emplace_back("max_displacement", format_double(cfg.program.max_displacement));
    e.emplace_back("mesh", cfg.mesh_path.empty() ? "(generated)" : cfg.mesh_path);
    e.emplace_back("out", cfg.out_dir);
    e.emplace_back("snapshot_every", std::to_string(cfg.snapshot_every));
    return e;
}

}  // namespace fracshape
