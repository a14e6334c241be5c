#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subaudit {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed data row in a delimited table.
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Table is missing a required column or is otherwise unusable.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Inconsistent records (e.g. a substitution naming an unknown player).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A value outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace subaudit
