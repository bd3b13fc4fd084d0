#include "sdnn/ann_linear.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdnn/binary_io.hpp"

namespace sdnn {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

Metric::Kind normalize_kind(const Metric& m) {
  if (m.kind() != Metric::Kind::Lp) return m.kind();
  if (m.exponent() == 1.0) return Metric::Kind::L1;
  if (m.exponent() == 2.0) return Metric::Kind::L2;
  throw std::invalid_argument("near-linear structure supports L1 and L2 only");
}

double grid_log(std::size_t d, const LinearAnnOptions& options) {
  if (!options.grid_bound || !(*options.grid_bound > 0.0))
    throw std::invalid_argument("expected-constant profile requires a positive grid bound");
  return std::log(*options.grid_bound * static_cast<double>(d));
}

}  // namespace

LinearConstants default_linear_constants(Metric::Kind kind, Profile profile) {
  if (profile == Profile::ExpectedConstant) return {0.01, 0.1};
  if (kind == Metric::Kind::L2) return {0.0005, 0.03};
  return {0.004, 0.03};
}

std::uint64_t linear_rounds(Metric::Kind kind, std::size_t n, std::size_t d, const Params& params,
                            const LinearAnnOptions& options) {
  if (options.rounds) return *options.rounds;
  const double c = params.rounds_constant.value_or(default_linear_constants(kind, options.profile).rounds_constant);
  const double eps = params.epsilon;
  const double nn = static_cast<double>(n);
  if (options.profile == Profile::ExpectedConstant)
    return scaled_count(c, std::log(nn) * grid_log(d, options) / std::pow(eps, 3));
  const double eps_power = kind == Metric::Kind::L2 ? 4.0 : 3.0;
  return scaled_count(c, std::log(nn / params.delta) / (std::pow(eps, eps_power) * params.delta * params.delta));
}

std::uint64_t linear_rows(Metric::Kind kind, std::size_t n, std::size_t d, const Params& params,
                          const LinearAnnOptions& options) {
  if (options.rows) return *options.rows;
  const double c = params.rows_constant.value_or(default_linear_constants(kind, options.profile).rows_constant);
  const double eps = params.epsilon;
  const double nn = static_cast<double>(n);
  if (options.profile == Profile::ExpectedConstant)
    return std::max<std::uint64_t>(1, scaled_count(c, std::log(nn) * grid_log(d, options) / (eps * eps)));
  return std::max<std::uint64_t>(
      1, scaled_count(c, std::log(nn / params.delta) / (eps * eps * params.delta * params.delta)));
}

double LinearAnn::scale(double p) const { return metric_ == Metric::Kind::L1 ? p : std::sqrt(p); }

void LinearAnn::index_distinct() {
  distinct_.clear();
  for (const auto& s : samples_) distinct_.push_back(s.coordinate);
  std::sort(distinct_.begin(), distinct_.end());
  distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());
  slot_.resize(samples_.size());
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const auto it = std::lower_bound(distinct_.begin(), distinct_.end(), samples_[k].coordinate);
    slot_[k] = static_cast<std::uint32_t>(it - distinct_.begin());
  }
}

LinearAnn LinearAnn::build(const PointSet& points, const Params& params, const LinearAnnOptions& options) {
  params.validate();
  LinearAnn s;
  s.metric_ = normalize_kind(points.metric());
  s.profile_ = options.profile;
  s.params_ = params;
  s.n_ = points.size();
  s.d_ = points.dim();
  const auto defaults = default_linear_constants(s.metric_, options.profile);
  s.params_.rounds_constant = params.rounds_constant.value_or(defaults.rounds_constant);
  s.params_.rows_constant = params.rows_constant.value_or(defaults.rows_constant);

  if (options.profile == Profile::ExpectedConstant) {
    grid_log(s.d_, options);
    s.grid_bound_ = *options.grid_bound;
    for (double v : points.coords())
      if (std::abs(v) > s.grid_bound_) throw std::invalid_argument("point outside [-D, D]^d");
  }

  Rng rng(params.seed);
  const double mass = s.n_ >= 2 ? probability_mass(points) : 0.0;
  if (mass == 0.0) {
    // One candidate, or all centers coincide: every answer is exact.
    s.degenerate_ = true;
    return s;
  }

  const ProbabilityVector pv = global_probabilities(points);
  s.mass_ = pv.mass;
  s.rounds_ = linear_rounds(s.metric_, s.n_, s.d_, params, options);
  s.rows_ = linear_rows(s.metric_, s.n_, s.d_, params, options);
  s.samples_ = sample_multiset(pv, s.rounds_, rng);
  s.index_distinct();

  const auto kind = s.metric_ == Metric::Kind::L1 ? ProjectionKind::Cauchy : ProjectionKind::SignJL;
  s.matrix_ = ProjectionMatrix::build(kind, s.rows_, s.samples_.size(), rng);

  s.centers_.resize(s.n_ * s.rows_);
  std::vector<double> r(s.samples_.size());
  for (std::size_t i = 0; i < s.n_; ++i) {
    for (std::size_t k = 0; k < s.samples_.size(); ++k)
      r[k] = points.at(i, s.samples_[k].coordinate) / s.scale(s.samples_[k].probability);
    const auto sketched = s.matrix_->project(r);
    std::copy(sketched.values.begin(), sketched.values.end(), s.centers_.begin() + static_cast<std::ptrdiff_t>(i * s.rows_));
    if (options.keep_rescaled) s.rescaled_.push_back(r);
  }
  return s;
}

LinearQueryResult LinearAnn::query_detailed(ProbeSource& q) const {
  if (q.dim() != d_) throw std::invalid_argument("query dimension mismatch");
  LinearQueryResult result;
  if (degenerate_) return result;

  std::vector<double> values(distinct_.size());
  for (std::size_t j = 0; j < distinct_.size(); ++j) {
    values[j] = q.read(distinct_[j]);
#ifndef NDEBUG
    if (grid_bound_ > 0.0 && std::abs(values[j]) > grid_bound_)
      throw std::invalid_argument("query coordinate outside [-D, D]");
#endif
  }
  std::vector<double> u(samples_.size());
  for (std::size_t k = 0; k < samples_.size(); ++k) u[k] = values[slot_[k]] / scale(samples_[k].probability);
  const auto mu = matrix_->project(u);

  result.estimates.resize(n_);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) {
    const auto ci = sketched_center(i);
    const double e = metric_ == Metric::Kind::L1 ? median_estimate(ci, mu.values) : l2_estimate(ci, mu.values);
    result.estimates[i] = e;
    if (e < best) {
      best = e;
      result.index = i;
    }
  }
  return result;
}

ProbeCount LinearAnn::probe_count() const {
  return {distinct_.size(), samples_.size(), static_cast<double>(rounds_) * mass_};
}

SpaceReport LinearAnn::space_report() const { return sketch_space(samples_.size(), rows_, degenerate_ ? 0 : n_); }

std::vector<std::uint8_t> LinearAnn::serialize() const {
  ByteWriter w;
  w.magic(metric_ == Metric::Kind::L1 ? "SDL1" : "SDL2");
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(profile_));
  w.u8(degenerate_ ? 1 : 0);
  w.f64(params_.epsilon);
  w.f64(params_.delta);
  w.f64(params_.rounds_constant.value_or(0.0));
  w.f64(params_.rows_constant.value_or(0.0));
  w.u64(params_.seed);
  w.f64(grid_bound_);
  w.u64(n_);
  w.u64(d_);
  w.u64(rounds_);
  w.u64(rows_);
  w.f64(mass_);
  w.u64(samples_.size());
  for (const auto& s : samples_) {
    w.u32(s.coordinate);
    w.u32(s.round);
    w.f64(s.probability);
  }
  if (matrix_) w.f64s(matrix_->entries());
  w.f64s(centers_);
  return w.take();
}

LinearAnn LinearAnn::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw std::runtime_error("truncated input");
  LinearAnn s;
  const bool l1 = bytes[3] == '1';
  ByteReader r(bytes);
  r.expect_magic(l1 ? "SDL1" : "SDL2");
  s.metric_ = l1 ? Metric::Kind::L1 : Metric::Kind::L2;
  if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported structure version");
  const auto profile = r.u8();
  if (profile > 1) throw std::runtime_error("unknown profile tag");
  s.profile_ = static_cast<Profile>(profile);
  s.degenerate_ = r.u8() != 0;
  s.params_.epsilon = r.f64();
  s.params_.delta = r.f64();
  s.params_.rounds_constant = r.f64();
  s.params_.rows_constant = r.f64();
  s.params_.seed = r.u64();
  s.grid_bound_ = r.f64();
  s.n_ = r.u64();
  s.d_ = r.u64();
  s.rounds_ = r.u64();
  s.rows_ = r.u64();
  s.mass_ = r.f64();
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / 16) throw std::runtime_error("truncated input");
  s.samples_.resize(count);
  for (auto& smp : s.samples_) {
    smp.coordinate = r.u32();
    smp.round = r.u32();
    smp.probability = r.f64();
    if (smp.coordinate >= s.d_) throw std::runtime_error("sampled coordinate out of range");
  }
  if (!s.degenerate_) {
    const auto kind = l1 ? ProjectionKind::Cauchy : ProjectionKind::SignJL;
    s.matrix_ = ProjectionMatrix::from_entries(kind, s.rows_, count, r.f64s(s.rows_ * count));
    s.centers_ = r.f64s(s.n_ * s.rows_);
  }
  r.expect_done();
  s.index_distinct();
  return s;
}

}  // namespace sdnn
