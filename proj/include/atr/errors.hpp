#pragma once

#include <stdexcept>
#include <string>

namespace atr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (formula, expression, LP file). Positions are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Input is well-formed but violates a model invariant (dimensions, boxes, labels, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A shifted index reached past the stored zero-input extension.
class ExtensionError : public Error {
public:
    using Error::Error;
};

/// Shift enumeration would exceed the configured cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace atr
