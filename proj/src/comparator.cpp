#include "sdnn/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdnn {

double truncation_threshold(double p, double epsilon) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("truncation threshold needs p > 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  return std::pow(1.0 + epsilon, p / (p - 1.0)) - 1.0;
}

bool in_scaled_bounding_box(std::span<const double> a, std::span<const double> b, std::span<const double> q,
                            double scale) {
  if (a.size() != b.size() || a.size() != q.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t z = 0; z < a.size(); ++z) {
    const double w = scale * std::abs(a[z] - b[z]);
    if (q[z] < std::min(a[z], b[z]) - w || q[z] > std::max(a[z], b[z]) + w) return false;
  }
  return true;
}

std::uint64_t comparator_rounds(double p, double epsilon, double delta, double rounds_constant) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return scaled_count(rounds_constant, std::log(1.0 / delta) * std::pow(2.0, p) / std::pow(epsilon, p + 2.0));
}

PairComparator PairComparator::build(std::span<const double> a, std::span<const double> b, double p, double epsilon,
                                     double delta, Rng& rng, const ComparatorOptions& options) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must satisfy 1 <= p < infinity");

  PairComparator c;
  c.p_ = p;
  c.epsilon_ = epsilon;
  c.truncated_ = options.truncated;
  c.rounds_ = options.rounds ? *options.rounds : comparator_rounds(p, epsilon, delta, options.rounds_constant);

  // Weights |b_i - a_i|^p, scaled by the largest gap so large p cannot overflow.
  double largest = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) largest = std::max(largest, std::abs(b[i] - a[i]));
  if (largest == 0.0) throw std::invalid_argument("zero-distance pair");
  std::vector<std::uint32_t> support;
  std::vector<double> weight;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double g = std::abs(b[i] - a[i]);
    if (g == 0.0) continue;
    support.push_back(static_cast<std::uint32_t>(i));
    weight.push_back(pow_abs(g / largest, p));
  }
  std::vector<double> suffix(weight.size() + 1, 0.0);
  for (std::size_t k = weight.size(); k-- > 0;) suffix[k] = suffix[k + 1] + weight[k];

  const double m = p > 1.0 ? truncation_threshold(p, epsilon) : 0.0;
  // T categorical draws, realized as a chain of conditional binomials.
  std::uint64_t left = c.rounds_;
  for (std::size_t k = 0; k < support.size() && left > 0; ++k) {
    const std::uint64_t count =
        k + 1 == support.size() ? left : rng.binomial(left, std::min(1.0, weight[k] / suffix[k]));
    if (count == 0) continue;
    left -= count;
    const std::uint32_t i = support[k];
    Entry e{i, count, a[i], b[i], std::min(a[i], b[i]), std::max(a[i], b[i])};
    if (p > 1.0) {
      const double widen = std::abs(b[i] - a[i]) / m;
      e.lo -= widen;
      e.hi += widen;
    }
    c.entries_.push_back(e);
  }
  return c;
}

PairComparator PairComparator::trivial(double p, double epsilon) {
  PairComparator c;
  c.p_ = p;
  c.epsilon_ = epsilon;
  c.trivial_ = true;
  return c;
}

std::vector<PairComparator::Term> PairComparator::terms(ProbeSource& q) const {
  std::vector<Term> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    double v = q.read(e.coordinate);
    if (truncated_) v = truncate(v, e.lo, e.hi);
    const double scale = pow_abs(e.b - e.a, p_);
    out.push_back({pow_abs(v - e.a, p_) / scale, pow_abs(e.b - v, p_) / scale});
  }
  return out;
}

CompareOutcome PairComparator::compare(ProbeSource& q, Rule rule) const {
  CompareOutcome out;
  if (trivial_) return out;
  const auto ts = terms(q);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double w = static_cast<double>(entries_[k].count);
    out.x += w * ts[k].x;
    out.y += w * ts[k].y;
  }
  if (rule == Rule::TwoWay) {
    out.decision = out.x <= out.y ? Decision::NearerA : Decision::NearerB;
  } else {
    const double factor = 1.0 + epsilon_ / 2.0;
    if (out.y >= factor * out.x)
      out.decision = Decision::NearerA;
    else if (out.x >= factor * out.y)
      out.decision = Decision::NearerB;
    else
      out.decision = Decision::Unknown;
  }
  return out;
}

void PairComparator::write(ByteWriter& w) const {
  w.u8(trivial_ ? 1 : 0);
  w.u8(truncated_ ? 1 : 0);
  w.f64(p_);
  w.f64(epsilon_);
  w.u64(rounds_);
  w.u64(entries_.size());
  for (const auto& e : entries_) {
    w.u32(e.coordinate);
    w.u64(e.count);
    w.f64(e.a);
    w.f64(e.b);
    w.f64(e.lo);
    w.f64(e.hi);
  }
}

PairComparator PairComparator::read(ByteReader& r) {
  PairComparator c;
  c.trivial_ = r.u8() != 0;
  c.truncated_ = r.u8() != 0;
  c.p_ = r.f64();
  c.epsilon_ = r.f64();
  c.rounds_ = r.u64();
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / 44) throw std::runtime_error("truncated input");
  c.entries_.resize(count);
  for (auto& e : c.entries_) {
    e.coordinate = r.u32();
    e.count = r.u64();
    e.a = r.f64();
    e.b = r.f64();
    e.lo = r.f64();
    e.hi = r.f64();
  }
  return c;
}

}  // namespace sdnn
