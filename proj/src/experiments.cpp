#include "sdnn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "sdnn/comparator.hpp"
#include "sdnn/range_search.hpp"
#include "sdnn/sampling.hpp"
#include "sdnn/tournament.hpp"

namespace sdnn::experiments {

namespace {

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

std::vector<double> gaussian_vector(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.normal();
  return v;
}

InstanceFn linear_instances(const LinearConfig& c) {
  if (c.generator == GeneratorKind::FromFile) {
    // One dataset for every trial; only the query varies.
    InstanceSpec spec;
    spec.generator = GeneratorKind::FromFile;
    spec.path = c.path;
    auto inst = std::make_shared<GeneratedInstance>(generate(spec));
    const Metric metric = c.metric;
    return [inst, metric](std::uint64_t seed) {
      Rng qrng(splitmix64(seed));
      auto query = inst->query(qrng);
      return Instance{inst->points.with_metric(metric), std::move(query)};
    };
  }
  return [c](std::uint64_t seed) {
    InstanceSpec spec;
    spec.generator = c.generator;
    spec.n = c.n;
    spec.d = c.d;
    spec.metric = c.metric;
    spec.gap = c.gap;
    spec.grid_bound = c.grid_bound;
    spec.seed = seed;
    auto inst = generate(spec);
    Rng qrng(splitmix64(seed));
    auto query = inst.query(qrng);
    return Instance{std::move(inst.points), std::move(query)};
  };
}

LinearAnnOptions linear_options(const LinearConfig& c) {
  LinearAnnOptions o;
  o.profile = c.profile;
  if (c.profile == Profile::ExpectedConstant) o.grid_bound = c.grid_bound;
  return o;
}

}  // namespace

MassBoundResult mass_bound(const MassBoundConfig& config) {
  MassBoundResult r;
  r.min_mass = std::numeric_limits<double>::infinity();
  for (const Metric metric : {Metric::l1(), Metric::l2()}) {
    Rng rng = Rng::derive(config.seed, metric.kind() == Metric::Kind::L1 ? 1 : 2);
    for (std::size_t k = 0; k < config.instances; ++k) {
      InstanceSpec spec;
      spec.metric = metric;
      spec.generator = k % 2 == 0 ? GeneratorKind::Gaussian : GeneratorKind::BooleanCube;
      spec.d = uniform_size(rng, 2, config.max_d);
      spec.n = uniform_size(rng, 2, config.max_n);
      if (spec.generator == GeneratorKind::BooleanCube && spec.d < 63)
        spec.n = std::min<std::size_t>(spec.n, std::size_t{1} << spec.d);
      spec.seed = rng();
      const auto inst = generate(spec);
      MassBoundRow row{metric.name(), generator_name(spec.generator), spec.n, spec.d,
                       probability_mass(inst.points), false};
      const double n = static_cast<double>(spec.n);
      row.ok = row.mass >= 1.0 - kMassSlack && row.mass <= n * (1.0 + kMassSlack);
      if (!row.ok) ++r.violations;
      r.min_mass = std::min(r.min_mass, row.mass);
      r.max_mass_over_n = std::max(r.max_mass_over_n, row.mass / n);
      r.rows.push_back(row);
    }
  }
  return r;
}

CollapseResult collapse_recurrence(std::size_t instances, std::uint64_t seed) {
  CollapseResult r;
  r.max_excess = -std::numeric_limits<double>::infinity();
  Rng rng(seed);
  while (r.instances < instances) {
    const std::size_t n = uniform_size(rng, 2, 15);
    const std::size_t d = uniform_size(rng, 2, 200);
    const bool integer = r.instances % 2 == 1;
    std::vector<double> coords(n * d);
    for (auto& v : coords) v = integer ? static_cast<double>(rng.below(7)) : rng.normal();
    const PointSet points(n, d, std::move(coords), Metric::l1());

    std::size_t i0 = 0, j0 = 1;
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (const double dist = distance(points.row(i), points.row(j), points.metric()); dist < closest) {
          closest = dist;
          i0 = i;
          j0 = j;
        }
    if (closest == 0.0) continue;  // duplicates: mass is over n' < n points

    const double before = probability_mass(points);
    const double after = probability_mass(collapse_pointset(points, i0, j0));
    const double excess = before - after - 1.0;
    r.max_excess = std::max(r.max_excess, excess);
    if (excess > kMassSlack * static_cast<double>(n)) ++r.violations;
    ++r.instances;
  }
  return r;
}

LinearResult linear_ann(const LinearConfig& config) {
  LinearResult r;
  r.proven_range = config.params.within_proven_range(config.metric);
  double multiset_sum = 0.0, mass_sum = 0.0;
  const auto options = linear_options(config);
  const SolverFn solver = [&](const PointSet& points, ProbeSource& q, std::uint64_t seed) {
    Params p = config.params;
    p.seed = seed;
    const auto s = LinearAnn::build(points, p, options);
    r.rounds = s.rounds();
    r.rows = s.rows();
    const std::uint64_t size = s.samples().size();
    multiset_sum += static_cast<double>(size);
    mass_sum += s.mass();
    r.max_multiset = std::max(r.max_multiset, size);
    if (size <= 2 * s.rounds() * s.size()) ++r.multiset_within_bound;
    return Answer{s.query(q), s.space_report().total()};
  };
  r.summary = run_trials(linear_instances(config), solver, config.trials, config.seed, config.params.epsilon);
  const double k = static_cast<double>(config.trials);
  r.mean_multiset = multiset_sum / k;
  r.mean_mass = mass_sum / k;
  return r;
}

MultisetBoundResult multiset_bound(const LinearConfig& config, std::size_t builds) {
  MultisetBoundResult r;
  const auto instances = linear_instances(config);
  const auto options = linear_options(config);
  for (std::size_t t = 0; t < builds; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    const Instance inst = instances(splitmix64(seed ^ 0x1));
    Params p = config.params;
    p.seed = splitmix64(seed ^ 0x2);
    const auto s = LinearAnn::build(inst.points, p, options);
    r.rounds = s.rounds();
    const std::uint64_t size = s.samples().size();
    r.max_multiset = std::max(r.max_multiset, size);
    if (size <= 2 * s.rounds() * s.size()) ++r.within;
    ++r.builds;
  }
  return r;
}

QuadraticResult quadratic_ann(const QuadraticConfig& config) {
  QuadraticResult r;
  const Metric metric = Metric::lp(config.p);
  r.proven_range = config.params.within_proven_range(metric);
  const InstanceFn instances = [&](std::uint64_t seed) {
    InstanceSpec spec;
    spec.generator = GeneratorKind::PlantedNN;
    spec.n = config.n;
    spec.d = config.d;
    spec.metric = metric;
    spec.gap = config.gap;
    spec.seed = seed;
    auto inst = generate(spec);
    Rng qrng(splitmix64(seed));
    auto query = inst.query(qrng);
    return Instance{std::move(inst.points), std::move(query)};
  };
  double comparisons = 0.0;
  const SolverFn solver = [&](const PointSet& points, ProbeSource& q, std::uint64_t seed) {
    Params p = config.params;
    p.seed = seed;
    QuadraticOptions o;
    o.strategy = config.strategy;
    const auto s = QuadraticAnn::build(points, p, o);
    r.pair_epsilon = s.pair_epsilon();
    r.pair_delta = s.pair_delta();
    if (s.pair_count() > 0) r.pair_rounds = s.comparator(0, 1).rounds();
    const auto res = s.query_detailed(q);
    comparisons += static_cast<double>(res.comparisons);
    r.max_comparisons = std::max(r.max_comparisons, res.comparisons);
    return Answer{res.index, s.space_report().total()};
  };
  r.summary = run_trials(instances, solver, config.trials, config.seed, config.params.epsilon);
  r.mean_comparisons = comparisons / static_cast<double>(config.trials);
  return r;
}

RangeResult range_search(const RangeConfig& config) {
  if (config.n < 3) throw std::invalid_argument("range experiment needs n >= 3");
  RangeResult r;
  r.trials = config.trials;
  const std::size_t n = config.n, d = config.d;
  const double eps = config.params.epsilon;
  double reported = 0.0, probes = 0.0, words = 0.0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    Rng rng(seed);
    const auto anchor = gaussian_vector(rng, d);
    std::vector<double> q1(d), q2(d), lo(d), hi(d);
    for (std::size_t b = 0; b < d; ++b) {
      lo[b] = anchor[b] - rng.uniform(0.1, 1.0);
      hi[b] = anchor[b] + rng.uniform(0.1, 1.0);
      const bool flip = rng.bernoulli(0.5);
      q1[b] = flip ? hi[b] : lo[b];
      q2[b] = flip ? lo[b] : hi[b];
    }
    const double diam = distance(q1, q2, Metric::l1());

    // Center 0 and 1 inside the box, center 2 beyond kappa * eps * diam.
    std::vector<double> coords;
    coords.reserve(n * d);
    coords.insert(coords.end(), anchor.begin(), anchor.end());
    for (std::size_t b = 0; b < d; ++b) coords.push_back(rng.uniform(lo[b], hi[b]));
    std::vector<double> far(d);
    for (std::size_t b = 0; b < d; ++b) far[b] = rng.uniform(lo[b], hi[b]);
    const double excess = rng.uniform(1.05, 2.0) * eps * diam;
    std::vector<std::size_t> coords_out(d);
    std::iota(coords_out.begin(), coords_out.end(), std::size_t{0});
    const std::size_t spread = std::min<std::size_t>(5, d);
    std::vector<double> share(spread);
    for (std::size_t k = 0; k < spread; ++k) {
      std::swap(coords_out[k], coords_out[k + rng.below(d - k)]);
      share[k] = rng.uniform(0.2, 1.0);
    }
    const double share_sum = std::accumulate(share.begin(), share.end(), 0.0);
    for (std::size_t k = 0; k < spread; ++k) {
      const std::size_t b = coords_out[k];
      const double e = excess * share[k] / share_sum;
      far[b] = rng.bernoulli(0.5) ? hi[b] + e : lo[b] - e;
    }
    coords.insert(coords.end(), far.begin(), far.end());
    for (std::size_t i = 3; i < n; ++i)
      for (std::size_t b = 0; b < d; ++b) coords.push_back(rng.normal());
    const PointSet points(n, d, std::move(coords), Metric::l1());

    Params p = config.params;
    p.seed = splitmix64(seed ^ 0x2);
    const auto s = RangeSearch::build(points, p);
    r.rounds = s.rounds();
    ProbeSource s1(q1), s2(q2);
    const auto got = s.query(s1, s2);
    for (std::size_t i : exact_range(points, q1, q2))
      if (!std::binary_search(got.begin(), got.end(), i)) ++r.false_negatives;
    const bool far_really_far = box_distance(points.row(2), q1, q2, Metric::l1()) > eps * diam;
    if (far_really_far && std::binary_search(got.begin(), got.end(), std::size_t{2})) ++r.far_included;
    reported += static_cast<double>(got.size());
    probes += static_cast<double>(s1.probes());
    words += static_cast<double>(s.space_report().total());
  }
  const double k = static_cast<double>(config.trials);
  r.far_inclusion_rate = static_cast<double>(r.far_included) / k;
  r.mean_reported = reported / k;
  r.mean_distinct_probes = probes / k;
  r.mean_words = words / k;
  return r;
}

SketchResult sketch_quality(const SketchConfig& config) {
  SketchResult r;
  r.rows = config.rows != 0 ? config.rows
                            : scaled_count(8.0, std::log(1.0 / config.failure) / (config.epsilon * config.epsilon));
  r.pairs = config.pairs;
  const Metric metric = config.kind == ProjectionKind::Cauchy ? Metric::l1() : Metric::l2();
  Rng rng(config.seed);
  for (std::size_t t = 0; t < config.pairs; ++t) {
    const auto x = gaussian_vector(rng, config.d);
    const auto y = gaussian_vector(rng, config.d);
    const auto m = ProjectionMatrix::build(config.kind, r.rows, config.d, rng);
    const auto mx = m.project(x), my = m.project(y);
    const double est = config.kind == ProjectionKind::Cauchy ? median_estimate(mx, my) : l2_estimate(mx, my);
    const double truth = distance(x, y, metric);
    const double err = std::abs(est / truth - 1.0);
    r.max_relative_error = std::max(r.max_relative_error, err);
    if (err < config.epsilon) ++r.within;
  }
  r.fraction = static_cast<double>(r.within) / static_cast<double>(config.pairs);
  return r;
}

ComparatorResult comparator(const ComparatorConfig& config) {
  ComparatorResult r;
  r.triples = config.triples;
  r.term_bound = std::pow(1.0 + 1.0 / config.epsilon, config.p);
  const Metric metric = Metric::lp(config.p);
  Rng rng(config.seed);
  ComparatorOptions options;
  options.rounds_constant = config.rounds_constant;
  double distinct = 0.0;
  for (std::size_t t = 0; t < config.triples; ++t) {
    std::vector<double> a, b, q(config.d);
    double da = 0.0, db = 0.0;
    do {
      a = gaussian_vector(rng, config.d);
      b = gaussian_vector(rng, config.d);
      const double lambda = rng.uniform(), sigma = rng.uniform(0.0, 2.0);
      for (std::size_t i = 0; i < config.d; ++i) q[i] = lambda * a[i] + (1 - lambda) * b[i] + sigma * rng.normal();
      da = distance(a, q, metric);
      db = distance(b, q, metric);
    } while (std::max(da, db) < (1.0 + config.epsilon) * std::min(da, db));

    const auto c = PairComparator::build(a, b, config.p, config.epsilon, config.delta, rng, options);
    r.rounds = c.rounds();
    distinct += static_cast<double>(c.distinct_coordinates());
    ProbeSource source(q);
    const auto outcome = c.compare(source, Rule::TwoWay);
    if ((outcome.decision == Decision::NearerA) == (da < db)) ++r.correct;
    ProbeSource again(q);
    for (const auto& term : c.terms(again)) {
      r.max_term = std::max({r.max_term, term.x, term.y});
      if (term.x < 0 || term.y < 0 || term.x > r.term_bound || term.y > r.term_bound) ++r.range_violations;
    }
  }
  r.correct_rate = static_cast<double>(r.correct) / static_cast<double>(config.triples);
  r.mean_distinct = distinct / static_cast<double>(config.triples);
  return r;
}

TruncationResult truncation_ratio(double p, double epsilon, std::size_t triples, std::size_t d, std::uint64_t seed) {
  TruncationResult r;
  r.p = p;
  r.triples = triples;
  r.min_gain = std::numeric_limits<double>::infinity();
  const Metric metric = Metric::lp(p);
  const double m = p > 1.0 ? truncation_threshold(p, epsilon) : 0.0;
  Rng rng(seed);
  for (std::size_t t = 0; t < triples; ++t) {
    std::vector<double> a, b, q(d);
    double ratio = 0.0;
    do {
      a = gaussian_vector(rng, d);
      b = gaussian_vector(rng, d);
      const double sigma = 0.05 * std::pow(1000.0, rng.uniform());
      for (std::size_t i = 0; i < d; ++i) q[i] = b[i] + sigma * rng.normal();
      ratio = distance(a, q, metric) / distance(b, q, metric);
    } while (ratio < 1.0 + epsilon);

    std::vector<double> truncated(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double widen = p > 1.0 ? std::abs(b[i] - a[i]) / m : 0.0;
      truncated[i] = truncate(q[i], std::min(a[i], b[i]) - widen, std::max(a[i], b[i]) + widen);
    }
    if (truncated != q) ++r.truncated;
    const double db = distance(b, truncated, metric);
    const double gain = db == 0.0 ? std::numeric_limits<double>::infinity()
                                  : distance(a, truncated, metric) / db / ratio;
    r.min_gain = std::min(r.min_gain, gain);
    if (gain < 1.0 - 1e-12) ++r.violations;
  }
  return r;
}

TournamentResult tournament_counts(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  TournamentResult r;
  r.all_exact = true;
  Rng rng(seed);
  for (std::size_t n : sizes) {
    std::vector<double> dist(n);
    for (auto& v : dist) v = rng.uniform();
    const CompareFn exact = [&](std::size_t i, std::size_t j) { return dist[i] <= dist[j] ? Pick::First : Pick::Second; };
    const auto res = QuadraticAnn::select(n, Strategy::Tournament, exact);
    TournamentRow row{n, res.comparisons, static_cast<double>(n) * log_log(n),
                      res.index == static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin())};
    r.all_exact = r.all_exact && row.exact;
    r.rows.push_back(row);
  }
  if (!r.rows.empty()) {
    r.fitted_c = static_cast<double>(r.rows.front().comparisons) / r.rows.front().n_log_log;
    r.within_fit = std::all_of(r.rows.begin(), r.rows.end(), [&](const TournamentRow& row) {
      return static_cast<double>(row.comparisons) <= r.fitted_c * row.n_log_log * (1.0 + 1e-12);
    });
  }
  return r;
}

SpaceScalingResult space_scaling(std::size_t n, std::size_t quadratic_d, const std::vector<std::size_t>& linear_n,
                                 std::size_t linear_d, std::uint64_t seed) {
  SpaceScalingResult r;
  std::uint64_t quad_words[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    InstanceSpec spec;
    spec.generator = GeneratorKind::Gaussian;
    spec.n = n << k;
    spec.d = quadratic_d;
    spec.metric = Metric::l2();
    spec.seed = splitmix64(seed + static_cast<std::uint64_t>(k));
    const auto inst = generate(spec);
    Params p = Params::with(0.2, 0.2);
    p.seed = spec.seed;
    quad_words[k] = QuadraticAnn::build(inst.points, p).space_report().total();
    r.rows.push_back({"quadratic", spec.n, spec.d, quad_words[k]});
  }
  r.quadratic_ratio = static_cast<double>(quad_words[1]) / static_cast<double>(quad_words[0]);
  for (std::size_t nn : linear_n) {
    InstanceSpec spec;
    spec.n = nn;
    spec.d = linear_d;
    spec.seed = splitmix64(seed ^ nn);
    const auto inst = generate(spec);
    Params p;
    p.seed = spec.seed;
    r.rows.push_back({"linear", nn, linear_d, LinearAnn::build(inst.points, p).space_report().total()});
  }
  return r;
}

}  // namespace sdnn::experiments
