#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace icesurf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid position attached to infeasibility diagnostics.
struct Pixel {
    int i = 0;
    int j = 0;
};

/// No finite-energy labeling exists (or none could be decoded).
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, std::optional<Pixel> where = std::nullopt)
        : Error(what), where_(where) {}

    const std::optional<Pixel>& where() const noexcept { return where_; }

private:
    std::optional<Pixel> where_;
};

/// A single column has no label with finite hard-constraint cost.
class EmptyFeasibleSet : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class ConfigInfeasible : public Error {
public:
    using Error::Error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Container / file format errors. All of them mean "bad input".
class FormatError : public Error {
public:
    using Error::Error;
};

class MissingFile : public FormatError {
public:
    using FormatError::FormatError;
};

class CorruptManifest : public FormatError {
public:
    using FormatError::FormatError;
};

class SizeMismatch : public FormatError {
public:
    using FormatError::FormatError;
};

class ChecksumMismatch : public FormatError {
public:
    using FormatError::FormatError;
};

class UnsupportedVersion : public FormatError {
public:
    using FormatError::FormatError;
};

/// Syntax or coverage problem in a CSV or key-value text file.
class MalformedFile : public FormatError {
public:
    using FormatError::FormatError;
};

/// Operating-system level read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace icesurf
