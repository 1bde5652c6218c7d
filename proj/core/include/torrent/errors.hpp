#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace torrent {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model document. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed document describing an invalid model.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed property string. Position is a 0-based character offset.
class PropertyError : public Error {
 public:
  PropertyError(const std::string& message, std::size_t position);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(std::size_t pivot);

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::size_t iterations, double residual);

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// A path that is not a path of the chain it is evaluated on.
class PathError : public Error {
 public:
  using Error::Error;
};

/// Rail search failures: no rail reaches the target, or the witness cap was hit.
class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace torrent
