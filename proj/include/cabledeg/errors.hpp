#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cabledeg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. `line` is 1-based (0 when unknown), `column` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Consecutive word symbols do not share an endpoint region.
class ChainError : public Error {
public:
    ChainError(const std::string& what, std::size_t first, std::size_t second)
        : Error(what), first_(first), second_(second) {}

    /// 0-based positions of the offending symbol pair.
    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

class RetriesExhausted : public Error {
public:
    using Error::Error;
};

/// A rounded winding value sat too far from the nearest integer.
class GuardExceeded : public Error {
public:
    GuardExceeded(const std::string& what, double value) : Error(what), value_(value) {}
    double value() const noexcept { return value_; }

private:
    double value_;
};

}  // namespace cabledeg
