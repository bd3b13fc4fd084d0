#pragma once

// Global max-ratio coordinate sampling.
//
// For every coordinate b the sampling probability is the largest share of a
// pairwise distance that b carries:
//
//   L1:  p_b = max_{i<j} |c_i[b] - c_j[b]| / |c_i - c_j|_1
//   L2:  p_b = max_{i<j} |c_i[b] - c_j[b]|^2 / |c_i - c_j|_2^2
//   Lp:  the same with p-th powers.
//
// The total mass sum_b p_b lies in [1, n] whenever two points differ.

#include <cstdint>
#include <span>
#include <vector>

#include "sdnn/core.hpp"

namespace sdnn {

/// Sparse per-coordinate probabilities; coordinates with p_b = 0 are implicit.
struct ProbabilityVector {
  std::size_t dim = 0;
  double exponent = 1.0;
  std::vector<std::uint32_t> index;  // ascending
  std::vector<double> prob;          // in (0, 1], parallel to index
  double mass = 0.0;

  std::size_t support() const { return index.size(); }
  /// p_b, zero for coordinates outside the support.
  double at(std::size_t b) const;
};

/// Throws std::invalid_argument("degenerate point set") if no two points differ.
ProbabilityVector global_probabilities(const PointSet& points);

/// sum_b p_b, or 0 when all points coincide.
double probability_mass(const PointSet& points);

struct SampledIndex {
  std::uint32_t coordinate;
  double probability;
  std::uint32_t round;
};

/// For every round t < rounds and every coordinate b, includes (t, b)
/// independently with probability p_b. Output is ordered by (round, b).
std::vector<SampledIndex> sample_multiset(const ProbabilityVector& pv, std::uint64_t rounds, Rng& rng);

/// Interval contraction: x below tau1 is kept, [tau1, tau2] maps to tau1, and
/// anything above tau2 shifts down by tau2 - tau1. Thresholds are swapped if
/// given in decreasing order.
double collapse(double x, double tau1, double tau2);

/// Coordinate-wise collapse with thresholds taken from points i0 and j0, whose
/// images coincide. Throws std::invalid_argument if i0 == j0.
PointSet collapse_pointset(const PointSet& points, std::size_t i0, std::size_t j0);

/// Word accounting for a sampled-and-sketched structure: one word per stored
/// index and per stored probability, rows*|I| for the projection matrix and
/// rows*centers for the sketched centers.
SpaceReport sketch_space(std::uint64_t multiset_size, std::uint64_t rows, std::uint64_t centers);

}  // namespace sdnn
