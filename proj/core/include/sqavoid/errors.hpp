#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqavoid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A configured resource cap was hit. Never used to signal a negative result.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

} // namespace sqavoid
