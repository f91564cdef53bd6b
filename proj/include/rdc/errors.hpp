#pragma once

#include <stdexcept>
#include <string>

namespace rdc {

// Base for everything thrown by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, preconditions, malformed configs. CLI exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Blow-ups, failed searches, non-converged iterations. CLI exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace rdc
