#pragma once

#include <stdexcept>
#include <string>

namespace pinnfem {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// MSH input is syntactically broken; carries the 1-based line number.
struct ParseError : Error {
    ParseError(int line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

// MSH element type outside the supported {line, triangle} subset.
struct UnsupportedElementError : Error {
    using Error::Error;
};

// Node index out of range (dangling reference in a file or a triangle list).
struct IndexError : Error {
    using Error::Error;
};

// Requested structured-mesh spacing does not divide the domain extent.
struct InvalidResolutionError : Error {
    using Error::Error;
};

// A Dirichlet selector matched no nodes.
struct EmptyBoundaryError : Error {
    using Error::Error;
};

// A traction spec names a boundary tag the mesh does not have.
struct MissingTagError : Error {
    using Error::Error;
};

// Domain decomposition violated a structural invariant.
struct DecompositionError : Error {
    using Error::Error;
};

// Query point does not lie in the given element.
struct OutOfElementError : Error {
    using Error::Error;
};

// Query point lies outside the mesh.
struct OutOfDomainError : Error {
    using Error::Error;
};

// The requested field strategy cannot represent the problem's Dirichlet set.
struct StrategyUnavailableError : Error {
    using Error::Error;
};

// A loss evaluation produced NaN/Inf; carries the offending point when known.
struct NonFiniteLossError : Error {
    NonFiniteLossError(const std::string& what, double x = 0.0, double y = 0.0)
        : Error(what), px(x), py(y) {}
    double px, py;
};

// The constrained FEM system still has rigid-body modes.
struct SingularSystemError : Error {
    SingularSystemError(int modes)
        : Error("singular system: " + std::to_string(modes) +
                " unconstrained rigid-body mode(s) detected"),
          rigid_modes(modes) {}
    int rigid_modes;
};

// Relative error against a truth component with zero L1 norm.
struct UndefinedMetricError : Error {
    using Error::Error;
};

// Experiment configuration is malformed or inconsistent.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace pinnfem
