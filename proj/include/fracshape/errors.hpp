#ifndef FRACSHAPE_ERRORS_HPP
#define FRACSHAPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracshape {

struct InvalidSizing : std::runtime_error {
    explicit InvalidSizing(const std::string& msg) : std::runtime_error(msg) {}
};

struct MeshingFailure : std::runtime_error {
    explicit MeshingFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct MalformedFile : std::runtime_error {
    explicit MalformedFile(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownTag : std::runtime_error {
    explicit UnknownTag(const std::string& msg) : std::runtime_error(msg) {}
};

struct DisconnectedCrack : std::runtime_error {
    explicit DisconnectedCrack(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateSegment : std::runtime_error {
    explicit DegenerateSegment(const std::string& msg) : std::runtime_error(msg) {}
};

struct ElementInversion : std::runtime_error {
    explicit ElementInversion(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverDivergence : std::runtime_error {
    explicit SolverDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fracshape

#endif
