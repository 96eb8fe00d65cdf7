#pragma once

#include <stdexcept>
#include <string>

namespace scalefit {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or schema-violating input data. Carries a 1-based line number
/// when the source is line-oriented (0 means "not applicable").
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// A value or combination of values outside its documented domain.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Parameter estimation could not produce a usable result.
class FitError : public Error {
  public:
    using Error::Error;
};

/// Filesystem / stream failures.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace scalefit
