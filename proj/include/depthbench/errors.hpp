#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depthbench {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or counts that do not line up (mask vs raster, pred vs gt, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A value outside the mathematical domain of an operation (depth <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No pixels / points / pairs left to average over.
class EmptyDomainError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but carries no information (zero deviation, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid invocation: bad arguments, nothing to evaluate.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents; `offset` is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace depthbench
