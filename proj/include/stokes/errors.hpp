#pragma once

#include <stdexcept>
#include <string>

namespace stokes {

/// File or text input that does not match the expected format.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent run / solver configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Base class for iterative-solver non-convergence.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stokes
