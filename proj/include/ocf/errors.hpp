#pragma once

#include <stdexcept>
#include <string>

namespace ocf {

// Error taxonomy mirrored by the CLI exit codes: usage=1, data=2, solver=3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or arguments (bad depth, even tree count, n_min > n, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Ingestion and parsing problems: CSV cells, manifests, forest files, LP text,
// solver solution files. Messages name the offending line/column where known.
struct ParseError : Error {
    using Error::Error;
};

// Dataset-content problems discovered after parsing (missing column, unknown
// category, dimension mismatch).
struct DataError : Error {
    using Error::Error;
};

// External solver failures: missing binary, crash, unusable output.
struct SolverError : Error {
    using Error::Error;
};

// Internal consistency violations that indicate a bug (solution/extraction
// disagreement, registry collisions). Not expected in normal operation.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace ocf
