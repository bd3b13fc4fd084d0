#pragma once

// Approximate orthogonal range search under L1. Coordinates are sampled with
// the global L1 probabilities over T = ceil(cT log(n/delta) / eps) rounds and
// the centers are stored unscaled on the sampled coordinates. A query box
// given by two corners reports every center that lies inside the box on all
// sampled coordinates, so a center inside the box is never missed.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/core.hpp"
#include "sdnn/sampling.hpp"

namespace sdnn {

constexpr double kDefaultRangeRounds = 2.0;

struct RangeOptions {
  std::optional<std::uint64_t> rounds;  // overrides T
};

std::uint64_t range_rounds(std::size_t n, const Params& params);

class RangeSearch {
 public:
  /// Throws std::invalid_argument unless the metric is L1 and at least two
  /// centers differ.
  static RangeSearch build(const PointSet& points, const Params& params, const RangeOptions& options = {});

  /// Ascending indices of the reported centers.
  std::vector<std::size_t> query(ProbeSource& q1, ProbeSource& q2) const;

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t multiset_size() const { return multiset_size_; }
  std::span<const std::uint32_t> coordinates() const { return coordinates_; }
  /// Center i restricted to coordinates(), in the same order.
  std::span<const double> stored(std::size_t i) const {
    return {values_.data() + i * coordinates_.size(), coordinates_.size()};
  }

  SpaceReport space_report() const;

  std::vector<std::uint8_t> serialize() const;
  static RangeSearch deserialize(std::span<const std::uint8_t> bytes);

 private:
  RangeSearch() = default;

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  Params params_;
  std::uint64_t rounds_ = 0;
  std::uint64_t multiset_size_ = 0;
  std::vector<std::uint32_t> coordinates_;  // distinct, ascending
  std::vector<double> values_;              // n x |coordinates|
};

}  // namespace sdnn
