#include "sdnn/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sdnn {

Metric Metric::lp(double p) {
  if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("Lp metric requires 1 <= p < inf");
  return Metric(Kind::Lp, p);
}

std::string Metric::name() const {
  switch (kind_) {
    case Kind::L1: return "L1";
    case Kind::L2: return "L2";
    case Kind::Lp: break;
  }
  std::string s = std::to_string(p_);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "Lp(" + s + ")";
}

Metric parse_metric(std::string_view name, std::optional<double> p) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "l1") return Metric::l1();
  if (lower == "l2") return Metric::l2();
  if (lower == "lp") {
    if (!p) throw std::invalid_argument("Lp metric requires an exponent");
    return Metric::lp(*p);
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw std::invalid_argument("non-finite coordinate");
  }
}

}  // namespace

double distance_pow(std::span<const double> a, std::span<const double> b, double p) {
  check_pair(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += pow_abs(a[i] - b[i], p);
  return s;
}

double distance(std::span<const double> a, std::span<const double> b, const Metric& metric) {
  switch (metric.kind()) {
    case Metric::Kind::L1: return distance_pow(a, b, 1.0);
    case Metric::Kind::L2: return std::sqrt(distance_pow(a, b, 2.0));
    case Metric::Kind::Lp: break;
  }
  const double p = metric.exponent();
  return std::pow(distance_pow(a, b, p), 1.0 / p);
}

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> coords, Metric metric)
    : n_(n), d_(d), coords_(std::move(coords)), metric_(metric) {
  if (n_ == 0 || d_ == 0) throw std::invalid_argument("point set needs n >= 1 and d >= 1");
  if (coords_.size() != n_ * d_) throw std::invalid_argument("coordinate count is not n*d");
  if (!std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("non-finite coordinate in point set");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows, Metric metric) {
  if (rows.empty()) throw std::invalid_argument("point set needs n >= 1 and d >= 1");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("ragged rows");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return PointSet(rows.size(), d, std::move(coords), metric);
}

double ProbeSource::read(std::size_t b) {
  if (b >= point_.size()) throw std::out_of_range("probe outside query dimension");
  ++reads_;
  if (!cache_ || seen_.insert(b).second) {
    ++probes_;
    if (tracing_) trace_.push_back(b);
  }
  return point_[b];
}

void Params::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  for (const auto& c : {rounds_constant, rows_constant}) {
    if (c && !(std::isfinite(*c) && *c > 0.0)) throw std::invalid_argument("constant multipliers must be positive");
  }
}

bool Params::within_proven_range(const Metric& metric) const {
  const double upper = metric.kind() == Metric::Kind::Lp ? 1.0 / (4.0 * metric.exponent()) : 0.25;
  return epsilon > 0.0 && epsilon < upper;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  // 53 random bits, offset by half a step so 0 and 1 are never produced.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("categorical weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("categorical weights sum to zero");
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (target < acc) return i;
  }
  return last_positive;
}

std::uint64_t Rng::binomial(std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<std::uint64_t>(trials, p)(engine_);
}

double cauchy_from_uniform(double u) { return std::tan(std::numbers::pi * (u - 0.5)); }

double Rng::cauchy() { return cauchy_from_uniform(uniform()); }

double Rng::normal() {
  // Box-Muller; one variate per call keeps the stream position simple.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t scaled_count(double c, double formula) {
  const double v = std::ceil(c * formula);
  if (!std::isfinite(v) || v > 0x1.0p53) throw std::invalid_argument("parameters give an unrepresentable sample count");
  return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v);
}

std::uint64_t SpaceReport::part(std::string_view name) const {
  for (const auto& p : parts)
    if (p.name == name) return p.words;
  return 0;
}

std::uint64_t SpaceReport::total() const {
  return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const Part& p) { return acc + p.words; });
}

}  // namespace sdnn
