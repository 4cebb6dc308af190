#pragma once

#include <stdexcept>
#include <string>

namespace bfarm {

/// Base for every recoverable error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed cell in a CSV input. Row and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : Error("parse error at row " + std::to_string(row) + ", column " +
                std::to_string(column) + ": " + what),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// No alive point left to answer a nearest-neighbour query.
class ExhaustedError : public Error {
public:
    using Error::Error;
};

/// Phase-1 clustering produced nothing usable to seed growth.
class SeedingError : public Error {
public:
    using Error::Error;
};

/// A validation metric is undefined for the given labelling.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace bfarm
