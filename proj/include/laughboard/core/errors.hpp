#pragma once

#include <stdexcept>
#include <string>

namespace laughboard {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller handed us something that violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A model, prompt or record id that is not registered.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A persisted file (ledger, header, dataset) failed to parse.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace laughboard
