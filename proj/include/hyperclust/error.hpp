#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperclust {

// Base for every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed records, schema violations, unparseable times.
class InputError : public Error {
public:
    using Error::Error;
};

// Malformed JSON or CSV; carries the 1-based line number.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Caller passed a parameter outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperclust
