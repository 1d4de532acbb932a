#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decisive {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments to a library call.
class InputError : public Error {
public:
    using Error::Error;
};

// A documented precondition does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

// The model violates a well-formedness rule.
class ModelError : public Error {
public:
    using Error::Error;
};

// The request lies outside every class the library can decide.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class BudgetExhausted : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(message), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace decisive
