#include "sdnn/sampling.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sdnn {

double ProbabilityVector::at(std::size_t b) const {
  const auto it = std::lower_bound(index.begin(), index.end(), b);
  if (it == index.end() || *it != b) return 0.0;
  return prob[static_cast<std::size_t>(it - index.begin())];
}

namespace {

// Dense max-ratio vector; returns false when every pair coincides.
bool dense_probabilities(const PointSet& points, std::vector<double>& p) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const double e = points.metric().exponent();
  p.assign(d, 0.0);
  bool any_pair = false;
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto cj = points.row(j);
      double norm = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        diff[b] = pow_abs(ci[b] - cj[b], e);
        norm += diff[b];
      }
      if (norm == 0.0) continue;
      any_pair = true;
      for (std::size_t b = 0; b < d; ++b) p[b] = std::max(p[b], diff[b] / norm);
    }
  }
  return any_pair;
}

}  // namespace

ProbabilityVector global_probabilities(const PointSet& points) {
  std::vector<double> dense;
  if (!dense_probabilities(points, dense)) throw std::invalid_argument("degenerate point set");
  if (points.dim() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("dimension exceeds 32-bit coordinate indices");

  ProbabilityVector pv;
  pv.dim = points.dim();
  pv.exponent = points.metric().exponent();
  for (std::size_t b = 0; b < dense.size(); ++b) {
    if (dense[b] <= 0.0) continue;
    pv.index.push_back(static_cast<std::uint32_t>(b));
    pv.prob.push_back(std::min(dense[b], 1.0));
    pv.mass += pv.prob.back();
  }
  return pv;
}

double probability_mass(const PointSet& points) {
  std::vector<double> dense;
  if (!dense_probabilities(points, dense)) return 0.0;
  double mass = 0.0;
  for (double v : dense) mass += v;
  return mass;
}

std::vector<SampledIndex> sample_multiset(const ProbabilityVector& pv, std::uint64_t rounds, Rng& rng) {
  if (rounds > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("too many sampling rounds");
  std::vector<SampledIndex> out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(rounds) * pv.mass * 1.2) + 8);
  for (std::uint64_t t = 0; t < rounds; ++t) {
    for (std::size_t k = 0; k < pv.support(); ++k) {
      if (rng.bernoulli(pv.prob[k])) out.push_back({pv.index[k], pv.prob[k], static_cast<std::uint32_t>(t)});
    }
  }
  return out;
}

double collapse(double x, double tau1, double tau2) {
  if (tau1 > tau2) std::swap(tau1, tau2);
  if (x <= tau1) return x;
  if (x <= tau2) return tau1;
  return x - (tau2 - tau1);
}

PointSet collapse_pointset(const PointSet& points, std::size_t i0, std::size_t j0) {
  if (i0 == j0) throw std::invalid_argument("collapse needs two distinct point indices");
  if (i0 >= points.size() || j0 >= points.size()) throw std::out_of_range("collapse index out of range");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const auto a = points.row(i0);
  const auto b = points.row(j0);
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = points.row(i);
    for (std::size_t z = 0; z < d; ++z) coords[i * d + z] = collapse(c[z], a[z], b[z]);
  }
  return PointSet(n, d, std::move(coords), points.metric());
}

SpaceReport sketch_space(std::uint64_t multiset_size, std::uint64_t rows, std::uint64_t centers) {
  SpaceReport r;
  r.add("indices", multiset_size);
  r.add("probabilities", multiset_size);
  r.add("projection_matrix", rows * multiset_size);
  r.add("sketched_centers", rows * centers);
  return r;
}

}  // namespace sdnn
