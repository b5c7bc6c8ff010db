#pragma once

#include <stdexcept>
#include <string>

namespace fusim {

// Shared physical constant. Every time-of-flight conversion in the toolkit
// goes through this value; never a local copy.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Base class for all toolkit failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file problems (parse errors carry line numbers,
/// value errors carry key names).
struct ConfigError : Error {
    using Error::Error;
};

/// Persistence-layer failures. Subclasses are distinct so callers can
/// tell a corrupt file from a truncated one.
struct IoError : Error {
    using Error::Error;
};
struct BadMagicError : IoError {
    using IoError::IoError;
};
struct BadVersionError : IoError {
    using IoError::IoError;
};
struct TruncatedError : IoError {
    using IoError::IoError;
};
struct ChecksumError : IoError {
    using IoError::IoError;
};
struct FormatError : IoError {
    using IoError::IoError;
};

/// Dimension / shape mismatches between data and consumers.
struct ShapeError : Error {
    using Error::Error;
};

/// Training-time failures (NaN loss, empty dataset).
struct TrainError : Error {
    using Error::Error;
};

}  // namespace fusim
