#pragma once

// Two-point comparators under Lp. A comparator for the pair (a, b) samples T
// coordinates with probability |b_i - a_i|^p / ||b - a||_p^p and keeps only
// a and b on those coordinates. Given probe access to q it truncates each
// probed value into a widened interval around [a_i, b_i] and compares
//   x = sum_t |q'_t - a_t|^p / |b_t - a_t|^p,   y = sum_t |b_t - q'_t|^p / |b_t - a_t|^p.
//
//   T = ceil(cT log(1/delta) 2^p / eps^(p+2))

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/binary_io.hpp"
#include "sdnn/core.hpp"

namespace sdnn {

enum class Decision : std::uint8_t { NearerA = 0, NearerB = 1, Unknown = 2 };

enum class Rule : std::uint8_t {
  TwoWay,    // a iff x <= y
  ThreeWay,  // a if y >= (1+eps/2) x, b if x >= (1+eps/2) y, otherwise Unknown
};

struct CompareOutcome {
  Decision decision = Decision::NearerA;
  double x = 0.0;
  double y = 0.0;
};

/// (1+eps)^(p/(p-1)) - 1. Throws for p <= 1 or eps < 0.
double truncation_threshold(double p, double epsilon);

/// Clamp into [l, u].
inline double truncate(double x, double l, double u) {
  if (x <= l) return l;
  if (x >= u) return u;
  return x;
}

/// Membership in the box that widens [min(a,b), max(a,b)] by scale*|a-b| per coordinate.
bool in_scaled_bounding_box(std::span<const double> a, std::span<const double> b, std::span<const double> q,
                            double scale = 100.0);

constexpr double kDefaultComparatorRounds = 2.0;

std::uint64_t comparator_rounds(double p, double epsilon, double delta, double rounds_constant = kDefaultComparatorRounds);

struct ComparatorOptions {
  bool truncated = true;  // false gives the untruncated l1 warm-up comparator
  std::optional<std::uint64_t> rounds;
  double rounds_constant = kDefaultComparatorRounds;
};

class PairComparator {
 public:
  /// One distinct sampled coordinate with its multiplicity among the T draws.
  struct Entry {
    std::uint32_t coordinate;
    std::uint64_t count;
    double a;
    double b;
    double lo;  // truncation interval
    double hi;
  };

  /// Throws std::invalid_argument if a == b, the dimensions differ, or the
  /// parameters are out of range.
  static PairComparator build(std::span<const double> a, std::span<const double> b, double p, double epsilon,
                              double delta, Rng& rng, const ComparatorOptions& options = {});
  /// Comparator for identical centers; always answers NearerA and reads nothing.
  static PairComparator trivial(double p, double epsilon);

  CompareOutcome compare(ProbeSource& q, Rule rule) const;

  /// Per-entry (X, Y) after truncation, one pair per distinct sampled
  /// coordinate; each stands for entry.count identical draws.
  struct Term {
    double x;
    double y;
  };
  std::vector<Term> terms(ProbeSource& q) const;

  bool is_trivial() const { return trivial_; }
  bool truncated() const { return truncated_; }
  double exponent() const { return p_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t rounds() const { return rounds_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t distinct_coordinates() const { return entries_.size(); }
  /// Six words per distinct entry plus p, eps, T.
  std::uint64_t words() const { return 6 * entries_.size() + 3; }

  void write(ByteWriter& w) const;
  static PairComparator read(ByteReader& r);

 private:
  PairComparator() = default;

  double p_ = 1.0;
  double epsilon_ = 0.0;
  std::uint64_t rounds_ = 0;
  bool trivial_ = false;
  bool truncated_ = true;
  std::vector<Entry> entries_;
};

}  // namespace sdnn
