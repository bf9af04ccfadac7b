#pragma once

#include <stdexcept>

namespace bnr {

// Bad parameters, malformed configs, broken invariants in input data.
// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File system and serialization failures. Exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requests beyond hard implementation bounds (state-space sweeps and the
// like). Exit code 4.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bnr
