#pragma once

// Brute-force ground truth. Oracles read full vectors and never touch a
// ProbeSource.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdnn/core.hpp"

namespace sdnn {

struct Nearest {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Exact nearest center, ties to the lowest index. Throws on an empty set or
/// a dimension mismatch.
Nearest exact_nn(const PointSet& points, std::span<const double> q);

std::vector<double> all_distances(const PointSet& points, std::span<const double> q);

/// Indices of centers inside the axis-aligned box spanned by q1 and q2.
std::vector<std::size_t> exact_range(const PointSet& points, std::span<const double> q1, std::span<const double> q2);

/// Distance from c to the box spanned by q1 and q2.
double box_distance(std::span<const double> c, std::span<const double> q1, std::span<const double> q2,
                    const Metric& metric);

/// dist(q, c_returned) / dist(q, c_nn); 1 when both are 0 and infinity when
/// only the optimum is 0.
double approximation_ratio(const PointSet& points, std::span<const double> q, std::size_t returned);

struct TrialReport {
  std::uint64_t seed = 0;
  std::size_t returned = 0;
  std::size_t truth = 0;
  double ratio = 1.0;
  std::uint64_t probes = 0;           // every read
  std::uint64_t distinct_probes = 0;  // distinct coordinates read
  std::uint64_t words = 0;
  bool success = false;
};

struct TrialSummary {
  std::vector<TrialReport> trials;
  double success_rate = 0.0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  double mean_probes = 0.0;
  double mean_distinct_probes = 0.0;
  std::uint64_t max_distinct_probes = 0;
  double mean_words = 0.0;
  std::uint64_t max_words = 0;
};

struct Instance {
  PointSet points;
  std::vector<double> query;
};

struct Answer {
  std::size_t index = 0;
  std::uint64_t words = 0;
};

/// Draws a fresh instance from a seed.
using InstanceFn = std::function<Instance(std::uint64_t seed)>;
/// Builds a structure from a seed and answers one query through the probe source.
using SolverFn = std::function<Answer(const PointSet&, ProbeSource&, std::uint64_t seed)>;

/// Seed of trial t: instance and build streams are derived from it.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t);

/// Runs trials serially. Success means ratio <= 1 + epsilon.
TrialSummary run_trials(const InstanceFn& instances, const SolverFn& solver, std::size_t trials, std::uint64_t seed,
                        double epsilon);

TrialSummary summarize(std::vector<TrialReport> trials);

}  // namespace sdnn
