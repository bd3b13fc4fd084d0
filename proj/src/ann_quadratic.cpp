#include "sdnn/ann_quadratic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sdnn/binary_io.hpp"

namespace sdnn {

namespace {
constexpr std::uint32_t kFormatVersion = 1;
}

Strategy default_strategy(std::size_t n) { return n <= 32 ? Strategy::Scan : Strategy::Tournament; }

QuadraticAnn QuadraticAnn::build(const PointSet& points, const Params& params, const QuadraticOptions& options) {
  params.validate();
  QuadraticAnn s;
  s.n_ = points.size();
  s.d_ = points.dim();
  s.p_ = points.metric().exponent();
  s.params_ = params;
  s.strategy_ = options.strategy.value_or(default_strategy(s.n_));

  const double n = static_cast<double>(s.n_);
  if (s.strategy_ == Strategy::Scan) {
    s.pair_epsilon_ = params.epsilon;
    s.pair_delta_ = params.delta / (n * n);
  } else {
    const double ll = log_log(s.n_);
    s.pair_epsilon_ = params.epsilon / ll;
    s.pair_delta_ = params.delta / (n * ll);
  }

  ComparatorOptions copts;
  copts.truncated = options.truncated;
  copts.rounds = options.rounds;
  copts.rounds_constant = params.rounds_constant.value_or(kDefaultComparatorRounds);

  Rng rng(params.seed);
  s.table_.reserve(s.n_ * (s.n_ - 1) / 2);
  for (std::size_t i = 0; i < s.n_; ++i) {
    for (std::size_t j = i + 1; j < s.n_; ++j) {
      const auto a = points.row(i);
      const auto b = points.row(j);
      if (std::equal(a.begin(), a.end(), b.begin()))
        s.table_.push_back(PairComparator::trivial(s.p_, s.pair_epsilon_));
      else
        s.table_.push_back(PairComparator::build(a, b, s.p_, s.pair_epsilon_, s.pair_delta_, rng, copts));
    }
  }
  return s;
}

const PairComparator& QuadraticAnn::comparator(std::size_t i, std::size_t j) const {
  if (!(i < j && j < n_)) throw std::out_of_range("comparator pair must satisfy i < j < n");
  return table_[slot(i, j)];
}

MinFindResult QuadraticAnn::select(std::size_t n, Strategy strategy, const CompareFn& cmp) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return strategy == Strategy::Scan ? scan_min(all, cmp) : tournament_min(all, cmp);
}

QuadraticQueryResult QuadraticAnn::query_detailed(ProbeSource& q) const {
  if (q.dim() != d_) throw std::invalid_argument("query dimension mismatch");
  const Rule rule = strategy_ == Strategy::Scan ? Rule::ThreeWay : Rule::TwoWay;
  const CompareFn cmp = [&](std::size_t i, std::size_t j) {
    const bool flipped = i > j;
    const auto& c = flipped ? comparator(j, i) : comparator(i, j);
    switch (c.compare(q, rule).decision) {
      case Decision::NearerA:
        return flipped ? Pick::Second : Pick::First;
      case Decision::NearerB:
        return flipped ? Pick::First : Pick::Second;
      default:
        return Pick::Unknown;
    }
  };
  const auto r = select(n_, strategy_, cmp);
  return {r.index, r.comparisons};
}

SpaceReport QuadraticAnn::space_report() const {
  std::uint64_t words = 0;
  for (const auto& c : table_) words += c.words();
  SpaceReport r;
  r.add("comparators", words);
  r.add("header", 5);
  return r;
}

std::vector<std::uint8_t> QuadraticAnn::serialize() const {
  ByteWriter w;
  w.magic("SDQP");
  w.u32(kFormatVersion);
  w.u64(n_);
  w.u64(d_);
  w.f64(p_);
  w.f64(params_.epsilon);
  w.f64(params_.delta);
  w.f64(params_.rounds_constant.value_or(0.0));
  w.u64(params_.seed);
  w.u8(static_cast<std::uint8_t>(strategy_));
  w.f64(pair_epsilon_);
  w.f64(pair_delta_);
  w.u64(table_.size());
  for (const auto& c : table_) c.write(w);
  return w.take();
}

QuadraticAnn QuadraticAnn::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("SDQP");
  if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported structure version");
  QuadraticAnn s;
  s.n_ = r.u64();
  s.d_ = r.u64();
  s.p_ = r.f64();
  s.params_.epsilon = r.f64();
  s.params_.delta = r.f64();
  if (const double c = r.f64(); c > 0.0) s.params_.rounds_constant = c;
  s.params_.seed = r.u64();
  const auto strategy = r.u8();
  if (strategy > 1) throw std::runtime_error("unknown strategy tag");
  s.strategy_ = static_cast<Strategy>(strategy);
  s.pair_epsilon_ = r.f64();
  s.pair_delta_ = r.f64();
  const std::uint64_t pairs = r.u64();
  if (s.n_ > (1u << 20) || pairs != s.n_ * (s.n_ == 0 ? 0 : s.n_ - 1) / 2)
    throw std::runtime_error("pair table size does not match n");
  s.table_.reserve(pairs);
  for (std::uint64_t k = 0; k < pairs; ++k) s.table_.push_back(PairComparator::read(r));
  r.expect_done();
  return s;
}

}  // namespace sdnn
