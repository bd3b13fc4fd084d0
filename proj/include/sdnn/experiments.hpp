#pragma once

// Experiment drivers shared by the bench CLI and the acceptance suite. Every
// driver is deterministic in its seed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdnn/ann_linear.hpp"
#include "sdnn/ann_quadratic.hpp"
#include "sdnn/core.hpp"
#include "sdnn/instances.hpp"
#include "sdnn/oracle.hpp"
#include "sdnn/sketch.hpp"

namespace sdnn::experiments {

// Floating-point slack for identities that hold exactly over the reals.
constexpr double kMassSlack = 1e-12;

struct MassBoundConfig {
  std::size_t instances = 200;  // per metric
  std::size_t max_n = 30;
  std::size_t max_d = 2000;
  std::uint64_t seed = 0;
};

struct MassBoundRow {
  std::string metric;
  std::string generator;
  std::size_t n = 0;
  std::size_t d = 0;
  double mass = 0.0;
  bool ok = false;
};

struct MassBoundResult {
  std::vector<MassBoundRow> rows;
  std::size_t violations = 0;
  double min_mass = 0.0;
  double max_mass_over_n = 0.0;
};

/// Random Gaussian and boolean-cube instances under L1 and L2; checks 1 <= mass <= n.
MassBoundResult mass_bound(const MassBoundConfig& config);

struct CollapseResult {
  std::size_t instances = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max of mass(C) - mass(C') - 1
};

/// Random L1 instances collapsed on their closest pair; checks mass(C) <= mass(C') + 1.
CollapseResult collapse_recurrence(std::size_t instances, std::uint64_t seed);

struct LinearConfig {
  Metric metric = Metric::l1();
  GeneratorKind generator = GeneratorKind::PlantedNN;
  std::size_t n = 10;
  std::size_t d = 10000;
  double gap = 2.0;
  double grid_bound = 100.0;
  std::filesystem::path path;  // from-file
  Params params;
  Profile profile = Profile::HighProbability;
  std::size_t trials = 400;
  std::uint64_t seed = 0;
};

struct LinearResult {
  TrialSummary summary;
  std::uint64_t rounds = 0;
  std::uint64_t rows = 0;
  double mean_multiset = 0.0;
  std::uint64_t max_multiset = 0;
  std::size_t multiset_within_bound = 0;  // builds with |I| <= 2Tn
  double mean_mass = 0.0;
  bool proven_range = false;
};

LinearResult linear_ann(const LinearConfig& config);

struct MultisetBoundResult {
  std::size_t builds = 0;
  std::size_t within = 0;  // |I| <= 2Tn
  std::uint64_t rounds = 0;
  std::uint64_t max_multiset = 0;
};

/// Builds only, one fresh instance per build.
MultisetBoundResult multiset_bound(const LinearConfig& config, std::size_t builds);

struct QuadraticConfig {
  std::size_t n = 8;
  std::size_t d = 2000;
  double p = 3.0;
  double gap = 2.0;
  Params params = Params::with(0.2, 0.2);
  Strategy strategy = Strategy::Scan;
  std::size_t trials = 300;
  std::uint64_t seed = 0;
};

struct QuadraticResult {
  TrialSummary summary;
  double mean_comparisons = 0.0;
  std::uint64_t max_comparisons = 0;
  double pair_epsilon = 0.0;
  double pair_delta = 0.0;
  std::uint64_t pair_rounds = 0;
  bool proven_range = false;
};

QuadraticResult quadratic_ann(const QuadraticConfig& config);

struct RangeConfig {
  std::size_t n = 10;
  std::size_t d = 2000;
  Params params = Params::with(0.25, 0.1);
  std::size_t trials = 400;
  std::uint64_t seed = 0;
};

struct RangeResult {
  std::size_t trials = 0;
  std::size_t false_negatives = 0;  // true members missing from the answer
  std::size_t far_included = 0;
  double far_inclusion_rate = 0.0;
  double mean_reported = 0.0;
  double mean_distinct_probes = 0.0;  // per corner
  double mean_words = 0.0;
  std::uint64_t rounds = 0;
};

/// Two centers inside a random box, one center just beyond eps * diam of it,
/// the rest Gaussian.
RangeResult range_search(const RangeConfig& config);

struct SketchConfig {
  ProjectionKind kind = ProjectionKind::Cauchy;
  std::size_t d = 300;
  std::size_t rows = 0;  // 0: ceil(8 log(1/failure) / eps^2)
  double epsilon = 0.25;
  double failure = 0.1;
  std::size_t pairs = 200;
  std::uint64_t seed = 0;
};

struct SketchResult {
  std::size_t rows = 0;
  std::size_t pairs = 0;
  std::size_t within = 0;
  double fraction = 0.0;
  double max_relative_error = 0.0;
};

SketchResult sketch_quality(const SketchConfig& config);

struct ComparatorConfig {
  double p = 1.0;
  double epsilon = 0.2;
  double delta = 0.1;
  std::size_t d = 50;
  std::size_t triples = 400;
  double rounds_constant = kDefaultComparatorRounds;
  std::uint64_t seed = 0;
};

struct ComparatorResult {
  std::size_t triples = 0;
  std::size_t correct = 0;
  double correct_rate = 0.0;
  std::size_t range_violations = 0;
  double max_term = 0.0;
  double term_bound = 0.0;  // (1 + 1/eps)^p
  std::uint64_t rounds = 0;
  double mean_distinct = 0.0;
};

/// Random triples (a, b, q) whose distance ratio is at least 1 + eps; the
/// two-way rule must name the nearer point.
ComparatorResult comparator(const ComparatorConfig& config);

struct TruncationResult {
  double p = 1.0;
  std::size_t triples = 0;
  std::size_t violations = 0;
  std::size_t truncated = 0;  // triples where truncation moved q
  double min_gain = 0.0;  // min over triples of truncated ratio / original ratio
};

/// Random triples with dist(a,q) / dist(b,q) >= 1 + eps, q truncated on every
/// coordinate; the ratio must not decrease.
TruncationResult truncation_ratio(double p, double epsilon, std::size_t triples, std::size_t d, std::uint64_t seed);

struct TournamentRow {
  std::size_t n = 0;
  std::uint64_t comparisons = 0;
  double n_log_log = 0.0;
  bool exact = false;  // returned the true minimum
};

struct TournamentResult {
  std::vector<TournamentRow> rows;
  double fitted_c = 0.0;  // comparisons / (n log log n) at the smallest n
  bool within_fit = false;
  bool all_exact = false;
};

/// Tournament over random distance arrays with an exact comparator.
TournamentResult tournament_counts(const std::vector<std::size_t>& sizes, std::uint64_t seed);

struct SpaceRow {
  std::string structure;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t words = 0;
};

struct SpaceScalingResult {
  std::vector<SpaceRow> rows;
  double quadratic_ratio = 0.0;  // words(2n) / words(n)
};

/// Quadratic words at n and 2n, and linear words for each listed n, fixed d.
SpaceScalingResult space_scaling(std::size_t n, std::size_t quadratic_d, const std::vector<std::size_t>& linear_n,
                                 std::size_t linear_d, std::uint64_t seed);

}  // namespace sdnn::experiments
