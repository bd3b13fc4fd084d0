#include "sdnn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdnn {

Nearest exact_nn(const PointSet& points, std::span<const double> q) {
  if (points.size() == 0) throw std::invalid_argument("nearest neighbor of an empty set");
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dist = distance(points.row(i), q, points.metric());
    if (dist < best.distance) best = {i, dist};
  }
  return best;
}

std::vector<double> all_distances(const PointSet& points, std::span<const double> q) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = distance(points.row(i), q, points.metric());
  return out;
}

std::vector<std::size_t> exact_range(const PointSet& points, std::span<const double> q1, std::span<const double> q2) {
  if (q1.size() != points.dim() || q2.size() != points.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool inside = true;
    for (std::size_t b = 0; b < points.dim() && inside; ++b) {
      const double v = points.at(i, b);
      inside = std::min(q1[b], q2[b]) <= v && v <= std::max(q1[b], q2[b]);
    }
    if (inside) out.push_back(i);
  }
  return out;
}

double box_distance(std::span<const double> c, std::span<const double> q1, std::span<const double> q2,
                    const Metric& metric) {
  if (c.size() != q1.size() || c.size() != q2.size()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> nearest(c.size());
  for (std::size_t b = 0; b < c.size(); ++b)
    nearest[b] = std::clamp(c[b], std::min(q1[b], q2[b]), std::max(q1[b], q2[b]));
  return distance(c, nearest, metric);
}

double approximation_ratio(const PointSet& points, std::span<const double> q, std::size_t returned) {
  const Nearest nn = exact_nn(points, q);
  const double got = distance(points.row(returned), q, points.metric());
  if (nn.distance == 0.0) return got == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return got / nn.distance;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) { return splitmix64(seed ^ splitmix64(t + 1)); }

TrialSummary summarize(std::vector<TrialReport> trials) {
  TrialSummary s;
  s.trials = std::move(trials);
  if (s.trials.empty()) return s;
  double success = 0, ratio = 0, probes = 0, distinct = 0, words = 0;
  for (const auto& t : s.trials) {
    success += t.success ? 1 : 0;
    ratio += t.ratio;
    probes += static_cast<double>(t.probes);
    distinct += static_cast<double>(t.distinct_probes);
    words += static_cast<double>(t.words);
    s.max_ratio = std::max(s.max_ratio, t.ratio);
    s.max_distinct_probes = std::max(s.max_distinct_probes, t.distinct_probes);
    s.max_words = std::max(s.max_words, t.words);
  }
  const double k = static_cast<double>(s.trials.size());
  s.success_rate = success / k;
  s.mean_ratio = ratio / k;
  s.mean_probes = probes / k;
  s.mean_distinct_probes = distinct / k;
  s.mean_words = words / k;
  return s;
}

TrialSummary run_trials(const InstanceFn& instances, const SolverFn& solver, std::size_t trials, std::uint64_t seed,
                        double epsilon) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  std::vector<TrialReport> reports;
  reports.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    TrialReport r;
    r.seed = trial_seed(seed, t);
    const Instance inst = instances(splitmix64(r.seed ^ 0x1));
    ProbeSource q(inst.query, true);
    const Answer a = solver(inst.points, q, splitmix64(r.seed ^ 0x2));
    r.returned = a.index;
    r.words = a.words;
    r.truth = exact_nn(inst.points, inst.query).index;
    r.ratio = approximation_ratio(inst.points, inst.query, a.index);
    r.probes = q.reads();
    r.distinct_probes = q.probes();
    r.success = r.ratio <= 1.0 + epsilon;
    reports.push_back(r);
  }
  return summarize(std::move(reports));
}

}  // namespace sdnn
