#include "inscribed/error.hpp"

namespace inscribed {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InconsistentDistances: return "inconsistent-distances";
    case ErrorKind::DegenerateSimplex: return "degenerate-simplex";
    case ErrorKind::DegenerateClass: return "degenerate-class";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::BoundaryConfiguration: return "boundary-configuration";
    case ErrorKind::NotSimilar: return "not-similar";
    case ErrorKind::Syntax: return "syntax-error";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::DegenerateRadius: return "degenerate-radius";
    case ErrorKind::PositivityViolation: return "positivity-violation";
    case ErrorKind::ChartSingularity: return "chart-singularity";
    case ErrorKind::OpenTrace: return "open-trace";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(ErrorKind kind, const std::string& message, std::size_t position)
    : Error(kind, message + " at position " + std::to_string(position)), position_(position) {}

NotSimilarError::NotSimilarError(const std::string& message, double max_deviation)
    : Error(ErrorKind::NotSimilar, message), max_deviation_(max_deviation) {}

}  // namespace inscribed
