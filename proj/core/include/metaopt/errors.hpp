// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_ERRORS_HPP
#define METAOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace metaopt {

struct NotHermitianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndefiniteMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a recorded loss turns non-finite mid-run; carries the iteration.
struct NonFiniteLossError : std::runtime_error {
    int iteration;
    NonFiniteLossError(const std::string& what, int iter)
        : std::runtime_error(what + " (iteration " + std::to_string(iter) + ")"),
          iteration(iter) {}
};

struct RankDeficientChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentGroupingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct ValidationError : ConfigError {
    using ConfigError::ConfigError;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace metaopt

#endif
