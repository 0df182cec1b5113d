#pragma once

#include <stdexcept>
#include <string>

namespace surfpde {

/// Invalid input: malformed file, bad configuration value, violated precondition.
/// The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown: iteration failed to converge, flow degenerated an
/// element, non-finite values. The CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace surfpde
