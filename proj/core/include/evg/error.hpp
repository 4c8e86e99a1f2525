#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "evg/format.hpp"

namespace evg {

// Base for all data-level failures (bad input files, violated sequence
// invariants, unsupported inputs). Usage/argument errors use
// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnsupportedInput : public Error {
public:
    using Error::Error;
};

// Events fed to a streaming builder out of time order.
class OrderingError : public Error {
public:
    explicit OrderingError(double time)
        : Error("event at time " + format_number(time) + " arrived after a later event"),
          time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

} // namespace evg
