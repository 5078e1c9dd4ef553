#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace inscribed {

enum class ErrorKind {
  InvalidArgument,
  InconsistentDistances,
  DegenerateSimplex,
  DegenerateClass,
  NotPositiveDefinite,
  RankDeficient,
  BoundaryConfiguration,
  NotSimilar,
  Syntax,
  UnknownIdentifier,
  DegenerateRadius,
  PositivityViolation,
  ChartSingularity,
  OpenTrace,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is
/// stable and meant for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& message, std::size_t position);

  /// Zero-based character offset into the source text.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class NotSimilarError : public Error {
 public:
  NotSimilarError(const std::string& message, double max_deviation);

  double max_deviation() const noexcept { return max_deviation_; }

 private:
  double max_deviation_;
};

}  // namespace inscribed
