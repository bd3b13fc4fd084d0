#pragma once

// Near-linear space (1+eps)-approximate nearest neighbor for L1 and L2.
//
// Preprocessing samples a multiset I of coordinates over T rounds using the
// global max-ratio probabilities, rescales every center on I (c/p for L1,
// c/sqrt(p) for L2), and stores the centers after an oblivious sketch M with
// m rows (Cauchy for L1, sign JL for L2). A query reads q on the distinct
// coordinates of I, applies the same rescaling and sketch, and returns the
// center with the smallest sketch-space estimate.
//
// Sample counts (HighProbability profile):
//   L1: T = ceil(cT log(n/delta) / (eps^3 delta^2))
//   L2: T = ceil(cT log(n/delta) / (eps^4 delta^2))
//   m  = ceil(cM log(n/delta) / (eps^2 delta^2))
// ExpectedConstant profile, for inputs in [-D, D]^d:
//   T = ceil(cT log(n) log(D d) / eps^3),  m = ceil(cM log(n) log(D d) / eps^2)

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/core.hpp"
#include "sdnn/sampling.hpp"
#include "sdnn/sketch.hpp"

namespace sdnn {

enum class Profile : std::uint8_t { HighProbability = 0, ExpectedConstant = 1 };

struct LinearAnnOptions {
  Profile profile = Profile::HighProbability;
  std::optional<double> grid_bound;     // D; required by ExpectedConstant
  std::optional<std::uint64_t> rounds;  // overrides T
  std::optional<std::uint64_t> rows;    // overrides m
  bool keep_rescaled = false;           // retain the rescaled centers r_i
};

struct LinearConstants {
  double rounds_constant;
  double rows_constant;
};

/// Default multipliers, calibrated so the planted-instance experiments meet
/// their success, probe and space targets at desk scale.
LinearConstants default_linear_constants(Metric::Kind kind, Profile profile);

std::uint64_t linear_rounds(Metric::Kind kind, std::size_t n, std::size_t d, const Params& params,
                            const LinearAnnOptions& options);
std::uint64_t linear_rows(Metric::Kind kind, std::size_t n, std::size_t d, const Params& params,
                          const LinearAnnOptions& options);

struct ProbeCount {
  std::uint64_t distinct = 0;  // coordinates actually read per query
  std::uint64_t multiset = 0;  // |I|, counting repeats
  double expected = 0.0;       // T * mass
};

struct LinearQueryResult {
  std::size_t index = 0;
  std::vector<double> estimates;  // sketch-space estimate per center
};

class LinearAnn {
 public:
  /// Throws std::invalid_argument for a metric other than L1/L2, invalid
  /// parameters, or an ExpectedConstant build without a grid bound (or with
  /// points outside it).
  static LinearAnn build(const PointSet& points, const Params& params, const LinearAnnOptions& options = {});

  std::size_t query(ProbeSource& q) const { return query_detailed(q).index; }
  LinearQueryResult query_detailed(ProbeSource& q) const;

  ProbeCount probe_count() const;
  SpaceReport space_report() const;

  std::vector<std::uint8_t> serialize() const;
  static LinearAnn deserialize(std::span<const std::uint8_t> bytes);

  Metric::Kind metric() const { return metric_; }
  Profile profile() const { return profile_; }
  const Params& params() const { return params_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t rows() const { return rows_; }
  double mass() const { return mass_; }
  bool degenerate() const { return degenerate_; }
  std::span<const SampledIndex> samples() const { return samples_; }
  std::span<const std::uint32_t> distinct_coordinates() const { return distinct_; }
  std::span<const double> sketched_center(std::size_t i) const { return {centers_.data() + i * rows_, rows_}; }
  const std::optional<ProjectionMatrix>& projection() const { return matrix_; }
  /// Rescaled centers restricted to I, one row per center; empty unless
  /// keep_rescaled was requested at build time.
  const std::vector<std::vector<double>>& rescaled() const { return rescaled_; }

 private:
  LinearAnn() = default;
  void index_distinct();
  double scale(double p) const;

  Metric::Kind metric_ = Metric::Kind::L1;
  Profile profile_ = Profile::HighProbability;
  Params params_;
  double grid_bound_ = 0.0;  // 0 when unbounded
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t rows_ = 0;
  double mass_ = 0.0;
  bool degenerate_ = false;
  std::vector<SampledIndex> samples_;
  std::optional<ProjectionMatrix> matrix_;
  std::vector<double> centers_;  // n x rows
  std::vector<std::vector<double>> rescaled_;

  // Derived on build/load; not part of the stored words.
  std::vector<std::uint32_t> distinct_;
  std::vector<std::uint32_t> slot_;  // samples_[k] reads distinct_[slot_[k]]
};

}  // namespace sdnn
