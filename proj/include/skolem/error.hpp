#pragma once

#include <stdexcept>
#include <string>

namespace skolem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An oracle query or search ran out of its configured budget. Never means unsat.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace skolem
