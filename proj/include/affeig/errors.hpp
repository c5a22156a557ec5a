#pragma once

#include <stdexcept>
#include <string>

namespace affeig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied a value outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A directional norm of a supposedly admissible function vanished.
class DegenerateDirection : public Error {
 public:
  DegenerateDirection(int index, double value, double threshold);
  int index() const { return index_; }

 private:
  int index_;
};

// Malformed input document; field() names the offending member.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace affeig
