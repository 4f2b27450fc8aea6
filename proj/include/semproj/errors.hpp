// Exception hierarchy shared by all semproj modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semproj {

/// Root of all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed bracketing in a tree line. Carries the character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed syntax but wrong content: bad index, count mismatch, unknown field.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Semantic constraint violated, e.g. overlapping spans inside one role.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad or incomplete configuration, including missing prerequisite inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A graph with an empty partition.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent cross-references between structures.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Solver and brute-force oracle disagree on an optimum.
class OracleMismatch : public IntegrityError {
 public:
  using IntegrityError::IntegrityError;
};

/// Brute-force oracle asked to enumerate an instance above its size guard.
class OracleRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace semproj
