#pragma once

#include <stdexcept>
#include <string>

namespace qnr {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    invalid_argument,
    unsupported_prime,
    unsupported_gate,
    width_limit,
    search_exhausted,
    parse,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

/// p is prime but not ≡ 1 (mod 8), or otherwise outside the benchmark family.
class UnsupportedPrime : public Error {
public:
    explicit UnsupportedPrime(const std::string& what) : Error(ErrorKind::unsupported_prime, what) {}
};

class UnsupportedGate : public Error {
public:
    explicit UnsupportedGate(const std::string& what) : Error(ErrorKind::unsupported_gate, what) {}
};

class WidthLimit : public Error {
public:
    explicit WidthLimit(const std::string& what) : Error(ErrorKind::width_limit, what) {}
};

class SearchExhausted : public Error {
public:
    explicit SearchExhausted(const std::string& what) : Error(ErrorKind::search_exhausted, what) {}
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(ErrorKind::parse, line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace qnr
