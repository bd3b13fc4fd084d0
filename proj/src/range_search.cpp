#include "sdnn/range_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdnn/binary_io.hpp"

namespace sdnn {

namespace {
constexpr std::uint32_t kFormatVersion = 1;
}

std::uint64_t range_rounds(std::size_t n, const Params& params) {
  const double c = params.rounds_constant.value_or(kDefaultRangeRounds);
  return scaled_count(c, std::log(static_cast<double>(n) / params.delta) / params.epsilon);
}

RangeSearch RangeSearch::build(const PointSet& points, const Params& params, const RangeOptions& options) {
  params.validate();
  if (points.metric().exponent() != 1.0) throw std::invalid_argument("range search supports L1 only");
  RangeSearch s;
  s.n_ = points.size();
  s.d_ = points.dim();
  s.params_ = params;
  const ProbabilityVector pv = global_probabilities(points);
  s.rounds_ = options.rounds ? *options.rounds : range_rounds(s.n_, params);

  Rng rng(params.seed);
  const auto samples = sample_multiset(pv, s.rounds_, rng);
  s.multiset_size_ = samples.size();
  for (const auto& smp : samples) s.coordinates_.push_back(smp.coordinate);
  std::sort(s.coordinates_.begin(), s.coordinates_.end());
  s.coordinates_.erase(std::unique(s.coordinates_.begin(), s.coordinates_.end()), s.coordinates_.end());

  s.values_.reserve(s.n_ * s.coordinates_.size());
  for (std::size_t i = 0; i < s.n_; ++i)
    for (auto z : s.coordinates_) s.values_.push_back(points.at(i, z));
  return s;
}

std::vector<std::size_t> RangeSearch::query(ProbeSource& q1, ProbeSource& q2) const {
  if (q1.dim() != d_ || q2.dim() != d_) throw std::invalid_argument("query dimension mismatch");
  const std::size_t k = coordinates_.size();
  std::vector<double> lo(k), hi(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double a = q1.read(coordinates_[j]);
    const double b = q2.read(coordinates_[j]);
    lo[j] = std::min(a, b);
    hi[j] = std::max(a, b);
  }
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto c = stored(i);
    bool inside = true;
    for (std::size_t j = 0; j < k && inside; ++j) inside = lo[j] <= c[j] && c[j] <= hi[j];
    if (inside) hits.push_back(i);
  }
  return hits;
}

SpaceReport RangeSearch::space_report() const {
  SpaceReport r;
  r.add("indices", coordinates_.size());
  r.add("stored_coordinates", values_.size());
  return r;
}

std::vector<std::uint8_t> RangeSearch::serialize() const {
  ByteWriter w;
  w.magic("SDRS");
  w.u32(kFormatVersion);
  w.u64(n_);
  w.u64(d_);
  w.f64(params_.epsilon);
  w.f64(params_.delta);
  w.f64(params_.rounds_constant.value_or(0.0));
  w.u64(params_.seed);
  w.u64(rounds_);
  w.u64(multiset_size_);
  w.u64(coordinates_.size());
  for (auto z : coordinates_) w.u32(z);
  w.f64s(values_);
  return w.take();
}

RangeSearch RangeSearch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("SDRS");
  if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported structure version");
  RangeSearch s;
  s.n_ = r.u64();
  s.d_ = r.u64();
  s.params_.epsilon = r.f64();
  s.params_.delta = r.f64();
  if (const double c = r.f64(); c > 0.0) s.params_.rounds_constant = c;
  s.params_.seed = r.u64();
  s.rounds_ = r.u64();
  s.multiset_size_ = r.u64();
  const std::uint64_t k = r.u64();
  if (k > r.remaining() / 4) throw std::runtime_error("truncated input");
  s.coordinates_.resize(k);
  for (auto& z : s.coordinates_) {
    z = r.u32();
    if (z >= s.d_) throw std::runtime_error("stored coordinate out of range");
  }
  if (s.n_ != 0 && k != 0 && s.n_ > r.remaining() / (8 * k)) throw std::runtime_error("truncated input");
  s.values_ = r.f64s(s.n_ * k);
  r.expect_done();
  return s;
}

}  // namespace sdnn
