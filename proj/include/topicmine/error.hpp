#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topicmine {

// Base for every error the library throws. Callers that only need to report
// and exit can catch this; the CLI maps the two subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, invalid configuration, unknown names.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file failed to parse; carries the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Failure while talking to an external system or writing outputs.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace topicmine
