#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Index conventions used throughout the library:
//  - storage (matrix rows, coordinate positions) is 0-based;
//  - time positions in public APIs and reports (s, e, b, k, tau) are
//    1-based inclusive, matching the file formats;
//  - a change-point tau is the last time index of the segment that
//    precedes the change; the next regime starts at tau + 1.

namespace hdcpd {

/// Raised when an input violates a documented precondition (bad sizes,
/// malformed files, non-finite values). The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
};

/// Time-ordered observations: row t holds the observation at time t+1 in R^p.
struct DataMatrix : RealMatrix {
  using RealMatrix::RealMatrix;

  std::size_t n() const { return rows; }
  std::size_t p() const { return cols; }

  /// Every entry must be finite; generators guarantee this, ingestion checks it.
  void require_finite() const {
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!std::isfinite(data[i])) {
        throw ValidationError("non-finite value at row " + std::to_string(i / cols + 1) +
                              ", column " + std::to_string(i % cols + 1));
      }
    }
  }
};

/// Symmetric pairwise-distance cache: d(i,j) = gamma(X_{i+1}, X_{j+1}),
/// zero diagonal. Computed once per analysis; every downstream statistic
/// reads from it instead of recomputing gamma.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> d;

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : n(size), d(size * size, 0.0) {}

  double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return d[i * n + j]; }
  const double* row_ptr(std::size_t i) const { return d.data() + i * n; }
};

}  // namespace hdcpd
