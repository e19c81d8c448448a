#pragma once

#include <stdexcept>
#include <string>

namespace pituning {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based when known, 0 otherwise.
struct ParseError : Error {
    int line{0};
    explicit ParseError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

/// A value violates the dataset schema (id out of range, inconsistent sizes).
struct SchemaError : Error {
    using Error::Error;
};

/// A function argument violates its contract.
struct ArgumentError : Error {
    using Error::Error;
};

/// Numerical failure: non-finite intermediate, undefined metric or distribution.
struct NumericalError : Error {
    using Error::Error;
};

/// File could not be opened, read or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace pituning
