#pragma once

// Foundational types shared by every structure: metrics, point sets,
// probe-counted query access, parameters, and the seeded random stream.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sdnn {

class Metric {
 public:
  enum class Kind : std::uint8_t { L1 = 0, L2 = 1, Lp = 2 };

  static Metric l1() { return Metric(Kind::L1, 1.0); }
  static Metric l2() { return Metric(Kind::L2, 2.0); }
  /// Throws std::invalid_argument unless 1 <= p < infinity.
  static Metric lp(double p);

  Kind kind() const { return kind_; }
  /// The norm exponent: 1 for L1, 2 for L2, p for Lp(p).
  double exponent() const { return p_; }
  std::string name() const;

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  Metric(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

/// Parses "L1", "L2", "Lp" (with an exponent) case-insensitively.
Metric parse_metric(std::string_view name, std::optional<double> p = std::nullopt);

/// (sum_b |a_b - b_b|^p)^(1/p). Throws std::invalid_argument on a dimension
/// mismatch or a non-finite coordinate.
double distance(std::span<const double> a, std::span<const double> b, const Metric& metric);

/// sum_b |a_b - b_b|^p without the outer root; used where ratios of p-th powers suffice.
double distance_pow(std::span<const double> a, std::span<const double> b, double p);

/// |x|^p with exact fast paths for p = 1 and p = 2.
inline double pow_abs(double x, double p) {
  const double ax = x < 0 ? -x : x;
  if (p == 1.0) return ax;
  if (p == 2.0) return ax * ax;
  return std::pow(ax, p);
}

/// n points in R^d stored row-major. Every coordinate is finite.
class PointSet {
 public:
  PointSet(std::size_t n, std::size_t d, std::vector<double> coords, Metric metric);
  static PointSet from_rows(const std::vector<std::vector<double>>& rows, Metric metric);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  const Metric& metric() const { return metric_; }
  std::span<const double> row(std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  double at(std::size_t i, std::size_t b) const { return coords_[i * d_ + b]; }
  std::span<const double> coords() const { return coords_; }

  PointSet with_metric(Metric metric) const { return PointSet(n_, d_, coords_, metric); }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> coords_;
  Metric metric_;
};

/// Coordinate-access oracle for a query point. Every read is counted; with
/// caching enabled a coordinate is counted the first time it is read only.
/// The referenced point must outlive the source.
class ProbeSource {
 public:
  explicit ProbeSource(std::span<const double> point, bool cache = false)
      : point_(point), cache_(cache) {}

  double read(std::size_t b);

  std::size_t dim() const { return point_.size(); }
  std::uint64_t probes() const { return probes_; }
  /// Every call to read, cached or not.
  std::uint64_t reads() const { return reads_; }
  bool caching() const { return cache_; }

  /// Records every counted read, in order.
  void enable_trace() { tracing_ = true; }
  const std::vector<std::size_t>& trace() const { return trace_; }

 private:
  std::span<const double> point_;
  bool cache_;
  bool tracing_ = false;
  std::uint64_t probes_ = 0;
  std::uint64_t reads_ = 0;
  std::unordered_set<std::size_t> seen_;
  std::vector<std::size_t> trace_;
};

/// Accuracy and confidence targets plus the constant multipliers standing in
/// for hidden O(.) constants. Unset multipliers take the per-structure default.
struct Params {
  double epsilon = 0.25;
  double delta = 0.2;
  std::optional<double> rounds_constant;  // cT
  std::optional<double> rows_constant;    // cM
  std::uint64_t seed = 0;

  static Params with(double epsilon, double delta, std::uint64_t seed = 0) {
    Params p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.seed = seed;
    return p;
  }

  /// Throws std::invalid_argument unless epsilon, delta are in (0, 1) and set
  /// multipliers are positive and finite.
  void validate() const;

  /// Whether epsilon lies in the range the approximation guarantee is proven
  /// for: (0, 1/4) for L1/L2 and (0, 1/(4p)) for general Lp.
  bool within_proven_range(const Metric& metric) const;
};

/// Seeded 64-bit stream. Identical seeds give identical sequences.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for (seed, stream index), e.g. per trial or worker.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Index drawn with probability proportional to weights[i].
  std::size_t categorical(std::span<const double> weights);
  std::uint64_t binomial(std::uint64_t trials, double p);
  double cauchy();
  double normal();
  int rademacher() { return (engine_() >> 63) != 0 ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
};

/// Standard Cauchy variate by inverse CDF: tan(pi (u - 1/2)).
double cauchy_from_uniform(double u);
inline double cauchy_variate(Rng& rng) { return rng.cauchy(); }

std::uint64_t splitmix64(std::uint64_t x);

/// ceil(c * formula) as a sample count; throws if the count is not representable.
std::uint64_t scaled_count(double c, double formula);

/// Word counts by part. One stored scalar or index is one word.
struct SpaceReport {
  struct Part {
    std::string name;
    std::uint64_t words;
  };
  std::vector<Part> parts;

  void add(std::string name, std::uint64_t words) { parts.push_back({std::move(name), words}); }
  std::uint64_t part(std::string_view name) const;
  std::uint64_t total() const;
};

}  // namespace sdnn
