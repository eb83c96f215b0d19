#pragma once

#include <stdexcept>
#include <string>

namespace semiwp {

/// Malformed or out-of-range input (dimension mismatch, bad axis, missing table entry, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix required to be invertible is singular or too ill-conditioned.
struct singular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Packet parameters fail the admissibility conditions.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Request exceeds a hard capacity limit (factorial range, table order cap).
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation not defined for these inputs (e.g. ladder operators with a shifted packet).
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace semiwp
