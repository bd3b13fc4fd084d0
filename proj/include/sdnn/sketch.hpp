#pragma once

// Oblivious linear sketches applied after coordinate selection.
//
// Cauchy:  i.i.d. standard Cauchy entries; the median of coordinate-wise
//          absolute differences of two sketches estimates their L1 distance.
// SignJL:  i.i.d. entries uniform on {+1/sqrt(m), -1/sqrt(m)}; the Euclidean
//          distance of two sketches estimates their L2 distance.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/core.hpp"

namespace sdnn {

enum class ProjectionKind : std::uint8_t { Cauchy = 0, SignJL = 1 };

struct SketchedPoint {
  std::vector<double> values;
  std::optional<std::size_t> origin;  // center index; empty for a query
};

class ProjectionMatrix {
 public:
  static ProjectionMatrix build(ProjectionKind kind, std::size_t rows, std::size_t cols, Rng& rng);
  /// Rebuilds a matrix from stored entries (row-major, rows*cols values).
  static ProjectionMatrix from_entries(ProjectionKind kind, std::size_t rows, std::size_t cols,
                                       std::vector<double> entries);

  ProjectionKind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const double> entries() const { return entries_; }

  /// Matrix-vector product; throws std::invalid_argument on a length mismatch.
  SketchedPoint project(std::span<const double> v, std::optional<std::size_t> origin = std::nullopt) const;

 private:
  ProjectionMatrix(ProjectionKind kind, std::size_t rows, std::size_t cols, std::vector<double> entries)
      : kind_(kind), rows_(rows), cols_(cols), entries_(std::move(entries)) {}

  ProjectionKind kind_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// median_k |x_k - y_k|; an even count averages the two central order statistics.
double median_estimate(std::span<const double> x, std::span<const double> y);
/// |x - y|_2.
double l2_estimate(std::span<const double> x, std::span<const double> y);

inline double median_estimate(const SketchedPoint& x, const SketchedPoint& y) {
  return median_estimate(x.values, y.values);
}
inline double l2_estimate(const SketchedPoint& x, const SketchedPoint& y) { return l2_estimate(x.values, y.values); }

}  // namespace sdnn
