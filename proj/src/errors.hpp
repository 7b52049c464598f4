#pragma once

#include <stdexcept>
#include <string>

namespace ilab {

// Invalid input: malformed distribution/signal/utility/config specs.
struct invalid_spec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: root-finder non-convergence, degenerate market, cap overruns.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures, reported with path context.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ilab
