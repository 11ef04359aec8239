#pragma once

#include <stdexcept>
#include <string>

namespace htc {

// Error taxonomy used across the library. The CLI maps these onto process
// exit codes: ArgumentError -> 1 (usage), ParseError / DimensionError /
// ValidationError -> 2 (bad data), NumericError -> 3 (numeric failure).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message carries the offending line number.
struct ParseError : Error {
    using Error::Error;
};

// Shape mismatch between related objects (attribute rows vs nodes, ...).
struct DimensionError : Error {
    using Error::Error;
};

// Caller passed an out-of-domain parameter.
struct ArgumentError : Error {
    using Error::Error;
};

// Structurally valid input that violates a semantic rule.
struct ValidationError : Error {
    using Error::Error;
};

// Non-finite values encountered during numeric work.
struct NumericError : Error {
    using Error::Error;
};

} // namespace htc
