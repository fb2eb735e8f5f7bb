#pragma once

#include <stdexcept>
#include <string>

namespace mlg {

// Error taxonomy maps onto the CLI exit codes: NumericalError -> 1,
// everything else derived from Error -> 2 (usage/format/size/config).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file contents: ragged CSV rows, bad magic, truncated payloads.
struct FormatError : Error {
    using Error::Error;
};

// Unparseable token (non-numeric, negative label, bad config value).
struct ParseError : FormatError {
    using FormatError::FormatError;
};

// Non-finite values where finite data is required.
struct NonFiniteError : FormatError {
    using FormatError::FormatError;
};

// Dimension mismatches between inputs.
struct SizeError : Error {
    using Error::Error;
};

// Parameter out of its documented range.
struct ParamError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Eigensolver/SVD breakdowns and other numerical failures.
struct NumericalError : Error {
    using Error::Error;
};

}  // namespace mlg
