#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccadm {

/// Base class for every recoverable engine error.
///
/// `kind()` is the short class name ("DateFormatError", ...). It is what
/// failed-cell records and CLI diagnostics print, so it must stay stable.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("IoError", message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("ParseError", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

// Row numbers are 1-based data rows; the header line is not counted.
class DateFormatError : public Error {
 public:
  DateFormatError(std::size_t row, const std::string& message)
      : Error("DateFormatError", message), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DuplicateDateError : public Error {
 public:
  DuplicateDateError(std::size_t row, const std::string& message)
      : Error("DuplicateDateError", message), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class CellParseError : public Error {
 public:
  CellParseError(std::size_t row, std::string column, const std::string& message)
      : Error("CellParseError", message), row_(row), column_(std::move(column)) {}
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class NoOverlapError : public Error {
 public:
  explicit NoOverlapError(const std::string& message) : Error("NoOverlapError", message) {}
};

class UnresolvedRefError : public Error {
 public:
  explicit UnresolvedRefError(const std::string& message) : Error("UnresolvedRefError", message) {}
};

class DuplicateScenarioError : public Error {
 public:
  explicit DuplicateScenarioError(const std::string& message)
      : Error("DuplicateScenarioError", message) {}
};

class InsufficientNeighborsError : public Error {
 public:
  explicit InsufficientNeighborsError(const std::string& message)
      : Error("InsufficientNeighborsError", message) {}
};

class SeriesTooShortError : public Error {
 public:
  SeriesTooShortError(std::size_t needed, std::size_t have, const std::string& message)
      : Error("SeriesTooShortError", message), needed_(needed), have_(have) {}
  std::size_t needed() const noexcept { return needed_; }
  std::size_t have() const noexcept { return have_; }

 private:
  std::size_t needed_;
  std::size_t have_;
};

class SplitError : public Error {
 public:
  explicit SplitError(const std::string& message) : Error("SplitError", message) {}
};

class NonFiniteDataError : public Error {
 public:
  explicit NonFiniteDataError(const std::string& message) : Error("NonFiniteDataError", message) {}
};

class FeatureShapeError : public Error {
 public:
  explicit FeatureShapeError(const std::string& message) : Error("FeatureShapeError", message) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error("ShapeError", message) {}
};

class AllExcludedError : public Error {
 public:
  explicit AllExcludedError(const std::string& message) : Error("AllExcludedError", message) {}
};

class UndefinedCorrelationError : public Error {
 public:
  explicit UndefinedCorrelationError(const std::string& message)
      : Error("UndefinedCorrelationError", message) {}
};

class MeasureError : public Error {
 public:
  explicit MeasureError(const std::string& message) : Error("MeasureError", message) {}
};

class CellNotFoundError : public Error {
 public:
  explicit CellNotFoundError(const std::string& message) : Error("CellNotFoundError", message) {}
};

class SuiteFailedError : public Error {
 public:
  explicit SuiteFailedError(const std::string& message) : Error("SuiteFailedError", message) {}
};

}  // namespace ccadm
