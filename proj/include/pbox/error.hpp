#pragma once

#include <stdexcept>
#include <string>

namespace pbox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text: a rational, an event literal, or a box file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid data (unknown labels, bad contexts, entries that
/// do not form distributions).
class ModelError : public Error {
public:
    using Error::Error;
};

/// A parameter outside the range an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace pbox
