#pragma once

// Quadratic-space (1+eps)-approximate nearest neighbor under Lp: one
// two-point comparator per pair of centers, queried by a champion scan
// (three-way rule) or the sqrt-partition tournament (two-way rule).
//
// Per-pair parameters:
//   scan:        eps' = eps,          delta' = delta / n^2
//   tournament:  eps' = eps / L,      delta' = delta / (n L),   L = log_log(n)

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/comparator.hpp"
#include "sdnn/core.hpp"
#include "sdnn/tournament.hpp"

namespace sdnn {

enum class Strategy : std::uint8_t { Scan = 0, Tournament = 1 };

Strategy default_strategy(std::size_t n);

struct QuadraticOptions {
  std::optional<Strategy> strategy;     // default_strategy(n) when unset
  bool truncated = true;                // false gives the l1 warm-up comparators
  std::optional<std::uint64_t> rounds;  // overrides T for every pair
};

struct QuadraticQueryResult {
  std::size_t index = 0;
  std::uint64_t comparisons = 0;
};

class QuadraticAnn {
 public:
  /// Throws std::invalid_argument for invalid parameters or n = 0.
  static QuadraticAnn build(const PointSet& points, const Params& params, const QuadraticOptions& options = {});

  std::size_t query(ProbeSource& q) const { return query_detailed(q).index; }
  QuadraticQueryResult query_detailed(ProbeSource& q) const;

  /// Runs the configured min-finding over [0, n) with an arbitrary comparator.
  static MinFindResult select(std::size_t n, Strategy strategy, const CompareFn& cmp);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  double exponent() const { return p_; }
  Strategy strategy() const { return strategy_; }
  double pair_epsilon() const { return pair_epsilon_; }
  double pair_delta() const { return pair_delta_; }
  std::size_t pair_count() const { return table_.size(); }
  /// Comparator for centers i < j.
  const PairComparator& comparator(std::size_t i, std::size_t j) const;

  SpaceReport space_report() const;

  std::vector<std::uint8_t> serialize() const;
  static QuadraticAnn deserialize(std::span<const std::uint8_t> bytes);

 private:
  QuadraticAnn() = default;
  std::size_t slot(std::size_t i, std::size_t j) const { return i * n_ - i * (i + 1) / 2 + (j - i - 1); }

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double p_ = 1.0;
  Params params_;
  Strategy strategy_ = Strategy::Scan;
  double pair_epsilon_ = 0.0;
  double pair_delta_ = 0.0;
  std::vector<PairComparator> table_;
};

}  // namespace sdnn
