#include "sdnn/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdnn {

ProjectionMatrix ProjectionMatrix::build(ProjectionKind kind, std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0) throw std::invalid_argument("projection needs at least one row");
  std::vector<double> entries(rows * cols);
  if (kind == ProjectionKind::Cauchy) {
    for (auto& e : entries) e = cauchy_variate(rng);
  } else {
    const double s = 1.0 / std::sqrt(static_cast<double>(rows));
    for (auto& e : entries) e = rng.rademacher() * s;
  }
  return ProjectionMatrix(kind, rows, cols, std::move(entries));
}

ProjectionMatrix ProjectionMatrix::from_entries(ProjectionKind kind, std::size_t rows, std::size_t cols,
                                                std::vector<double> entries) {
  if (rows == 0) throw std::invalid_argument("projection needs at least one row");
  if (entries.size() != rows * cols) throw std::invalid_argument("projection entry count is not rows*cols");
  return ProjectionMatrix(kind, rows, cols, std::move(entries));
}

SketchedPoint ProjectionMatrix::project(std::span<const double> v, std::optional<std::size_t> origin) const {
  if (v.size() != cols_) throw std::invalid_argument("projection length mismatch");
  SketchedPoint out{std::vector<double>(rows_, 0.0), origin};
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = entries_.data() + r * cols_;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
    out.values[r] = acc;
  }
  return out;
}

double median_estimate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sketch length mismatch");
  if (x.empty()) throw std::invalid_argument("empty sketch");
  std::vector<double> diffs(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) diffs[k] = std::abs(x[k] - y[k]);
  const std::size_t mid = diffs.size() / 2;
  std::nth_element(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(mid), diffs.end());
  const double upper = diffs[mid];
  if (diffs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double l2_estimate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sketch length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = x[k] - y[k];
    s += t * t;
  }
  return std::sqrt(s);
}

}  // namespace sdnn
