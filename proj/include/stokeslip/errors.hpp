#pragma once

#include <stdexcept>
#include <string>

namespace stokeslip {

// Iterative process failed to reach its tolerance within the iteration budget.
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Point lies outside the tubular neighborhood where the closest-point
// projection is well defined.
struct OutsideTubularNeighborhood : std::runtime_error {
  explicit OutsideTubularNeighborhood(const std::string& what) : std::runtime_error(what) {}
};

// Query point is not on the domain boundary (within tolerance).
struct NotOnBoundary : std::runtime_error {
  explicit NotOnBoundary(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; message names the offending line.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

// Mesh violates a structural invariant (orientation, conformity, Euler count).
struct TopologyError : std::runtime_error {
  explicit TopologyError(const std::string& what) : std::runtime_error(what) {}
};

// Refinement produced triangles below the minimum shape-quality threshold.
struct QualityDegradation : std::runtime_error {
  QualityDegradation(const std::string& what, double quality)
      : std::runtime_error(what), min_quality(quality) {}
  double min_quality;
};

// Exact zero pivot in an incomplete factorization.
struct BreakdownError : std::runtime_error {
  explicit BreakdownError(const std::string& what) : std::runtime_error(what) {}
};

// Dense factorization hit a negligible pivot.
struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration (bad value, unknown key, inconsistent options).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem read/write failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stokeslip
