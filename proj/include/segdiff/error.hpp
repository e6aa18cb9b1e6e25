#pragma once

#include <stdexcept>
#include <string>

namespace segdiff {

// Base for every failure the library reports. The CLI maps DataError to exit
// code 1 and UsageError to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("usage", message) {}
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message)
      : DataError("parse", "line " + std::to_string(line) + ": field '" +
                               field + "': " + message),
        line_(line),
        field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class SegmentationError : public DataError {
 public:
  explicit SegmentationError(const std::string& message)
      : DataError("segmentation", message) {}
};

class UnalignableError : public DataError {
 public:
  explicit UnalignableError(const std::string& message)
      : DataError("unalignable", message) {}
};

class InvalidArgument : public DataError {
 public:
  explicit InvalidArgument(const std::string& message)
      : DataError("invalid_argument", message) {}
};

}  // namespace segdiff
