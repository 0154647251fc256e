#pragma once

#include <stdexcept>
#include <string>

namespace pcae {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible shapes passed to a kernel or pipeline stage.
struct DimensionError : Error {
    using Error::Error;
};

// File parsing / serialization failures.
struct IoError : Error {
    using Error::Error;
};

// Numerical failures: rank deficiency, non-convergence, NaN/Inf.
struct NumericError : Error {
    using Error::Error;
};

// Invalid user-supplied configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace pcae
