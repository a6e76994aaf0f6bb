#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nbp {

/// Base class for all library errors so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input that cannot be skipped (bad header, unreadable stream,
/// empty result set). Recoverable per-row problems are reported through
/// CleaningReport instead of thrown.
struct ParseError : Error {
    using Error::Error;
};

/// Inputs outside the mathematical domain of an operation (non-positive
/// spot, price outside no-arbitrage bounds, empty curve category...).
struct DomainError : Error {
    using Error::Error;
};

/// An iterative routine failed to converge.
struct NumericError : Error {
    using Error::Error;
};

/// Design matrix is rank deficient. `columns` names the offending columns.
struct RankError : Error {
    RankError(const std::string& msg, std::vector<std::string> cols)
        : Error(msg), columns(std::move(cols)) {}
    std::vector<std::string> columns;
};

/// Too few usable observations to fit a model.
struct InsufficientRowsError : Error {
    using Error::Error;
};

/// Invalid configuration value; message names the field.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem problem (unreadable path, failed write).
struct IoError : Error {
    using Error::Error;
};

}  // namespace nbp
