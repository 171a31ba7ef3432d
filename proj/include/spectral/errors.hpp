#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

// Invalid polytope input: non-planar/degenerate faces, open boundary, zero volume.
struct InvalidGeometryError : std::runtime_error {
    explicit InvalidGeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Face erosion cannot satisfy the requested area fraction with a positive margin.
struct DecompositionError : std::runtime_error {
    explicit DecompositionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid spacing leaves no interior nodes to discretize.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative eigensolver failed to reach the residual tolerance.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Query outside the range an oracle can certify (e.g. counting past the
// enumerated part of a spectrum, or k beyond the computed eigenvalues).
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad campaign configuration or domain file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal identity the theory guarantees failed numerically; always a bug
// (or fault injection), never a property of valid inputs.
struct ConsistencyError : std::runtime_error {
    explicit ConsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace spectral
