#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sdnn/ann_linear.hpp"
#include "sdnn/experiments.hpp"
#include "sdnn/instances.hpp"
#include "sdnn/oracle.hpp"

using namespace sdnn;

namespace {

PointSet gaussian(std::size_t n, std::size_t d, Metric m, std::uint64_t seed) {
  InstanceSpec spec;
  spec.generator = GeneratorKind::Gaussian;
  spec.n = n;
  spec.d = d;
  spec.metric = m;
  spec.seed = seed;
  return generate(spec).points;
}

LinearAnnOptions with_rounds(std::uint64_t t) {
  LinearAnnOptions o;
  o.rounds = t;
  return o;
}

}  // namespace

TEST_CASE("sample counts follow the formulas") {
  const Params p = Params::with(0.25, 0.2);
  const double l = std::log(10.0 / 0.2);
  CHECK(linear_rounds(Metric::Kind::L1, 10, 100, p, {}) == std::ceil(0.004 * l / (std::pow(0.25, 3) * 0.04)));
  CHECK(linear_rounds(Metric::Kind::L2, 10, 100, p, {}) == std::ceil(0.0005 * l / (std::pow(0.25, 4) * 0.04)));
  CHECK(linear_rows(Metric::Kind::L1, 10, 100, p, {}) == std::ceil(0.03 * l / (0.0625 * 0.04)));

  Params q = p;
  q.rounds_constant = 2.0;
  q.rows_constant = 8.0;
  CHECK(linear_rounds(Metric::Kind::L1, 10, 100, q, {}) == std::ceil(2.0 * l / (std::pow(0.25, 3) * 0.04)));
  CHECK(linear_rows(Metric::Kind::L2, 10, 100, q, {}) == std::ceil(8.0 * l / (0.0625 * 0.04)));

  LinearAnnOptions e;
  e.profile = Profile::ExpectedConstant;
  e.grid_bound = 100;
  const double g = std::log(10.0) * std::log(100.0 * 5000);
  CHECK(linear_rounds(Metric::Kind::L1, 10, 5000, p, e) == std::ceil(0.01 * g / std::pow(0.25, 3)));
  CHECK(linear_rows(Metric::Kind::L1, 10, 5000, p, e) == std::ceil(0.1 * g / 0.0625));
  e.grid_bound.reset();
  CHECK_THROWS(linear_rounds(Metric::Kind::L1, 10, 5000, p, e));
}

TEST_CASE("build preconditions") {
  const auto ps = gaussian(4, 10, Metric::l1(), 1);
  CHECK_THROWS(LinearAnn::build(ps.with_metric(Metric::lp(3)), Params{}));
  CHECK_NOTHROW(LinearAnn::build(ps.with_metric(Metric::lp(1)), Params{}));
  CHECK_THROWS(LinearAnn::build(ps, Params::with(0.0, 0.2)));
  LinearAnnOptions e;
  e.profile = Profile::ExpectedConstant;
  CHECK_THROWS(LinearAnn::build(ps, Params{}, e));
  e.grid_bound = 0.5;  // gaussian coordinates exceed this
  CHECK_THROWS(LinearAnn::build(ps, Params{}, e));
}

TEST_CASE("single candidate and coincident centers") {
  const auto one = PointSet::from_rows({{1, 2, 3}}, Metric::l1());
  const auto s = LinearAnn::build(one, Params{});
  CHECK(s.degenerate());
  const std::vector<double> q{0, 0, 0};
  ProbeSource src(q);
  CHECK(s.query(src) == 0);
  CHECK(src.probes() == 0);
  CHECK(s.space_report().total() == 0);

  const auto same = PointSet::from_rows({{1, 2}, {1, 2}}, Metric::l2());
  CHECK(LinearAnn::build(same, Params{}).degenerate());
}

TEST_CASE("zero-probability coordinates are never sampled") {
  const auto ps = PointSet::from_rows({{0, 0}, {1, 0}}, Metric::l1());
  for (std::uint64_t t : {1u, 5u, 50u}) {
    const auto s = LinearAnn::build(ps, Params{}, with_rounds(t));
    CHECK(s.probe_count().distinct == 1);
    CHECK(s.distinct_coordinates()[0] == 0);
    CHECK(s.probe_count().multiset == t);  // p = 1 on the only coordinate
  }
}

TEST_CASE("no rounds means no probes") {
  const auto ps = gaussian(5, 20, Metric::l1(), 2);
  const auto s = LinearAnn::build(ps, Params{}, with_rounds(0));
  const std::vector<double> q(20, 0.5);
  ProbeSource src(q);
  CHECK(s.query(src) == 0);
  CHECK(src.probes() == 0);
  CHECK(s.probe_count().distinct == 0);
  CHECK(s.probe_count().expected == 0.0);
}

TEST_CASE("query at a center returns it with estimate zero") {
  for (const Metric m : {Metric::l1(), Metric::l2()}) {
    const auto ps = gaussian(8, 200, m, 3);
    const auto s = LinearAnn::build(ps, Params::with(0.2, 0.2, 9));
    for (std::size_t j = 0; j < ps.size(); ++j) {
      ProbeSource src(ps.row(j));
      const auto r = s.query_detailed(src);
      CHECK(r.index == j);
      CHECK(r.estimates[j] == 0.0);
    }
  }
}

TEST_CASE("rescaled centers") {
  for (const Metric m : {Metric::l1(), Metric::l2()}) {
    const auto ps = gaussian(5, 60, m, 4);
    LinearAnnOptions o;
    o.keep_rescaled = true;
    const auto s = LinearAnn::build(ps, Params::with(0.2, 0.2, 1), o);
    REQUIRE(s.rescaled().size() == ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t k = 0; k < s.samples().size(); ++k) {
        const auto& smp = s.samples()[k];
        const double scale = m == Metric::l1() ? smp.probability : std::sqrt(smp.probability);
        CHECK(s.rescaled()[i][k] == ps.at(i, smp.coordinate) / scale);
      }
      const auto sketched = s.projection()->project(s.rescaled()[i]);
      CHECK(std::ranges::equal(sketched.values, s.sketched_center(i)));
    }
  }
}

TEST_CASE("stored words match the space report") {
  const auto ps = gaussian(6, 300, Metric::l1(), 5);
  const auto s = LinearAnn::build(ps, Params::with(0.2, 0.2, 3));
  const std::uint64_t k = s.samples().size();
  CHECK(s.space_report().total() == 2 * k + s.rows() * k + s.rows() * ps.size());
  CHECK(s.projection()->entries().size() == s.rows() * k);
}

TEST_CASE("queries only read sampled coordinates, once each") {
  const auto ps = gaussian(6, 500, Metric::l1(), 6);
  const auto s = LinearAnn::build(ps, Params::with(0.2, 0.2, 4));
  const std::set<std::size_t> allowed(s.distinct_coordinates().begin(), s.distinct_coordinates().end());
  Rng rng(7);
  std::vector<double> q(500);
  for (auto& v : q) v = rng.normal();
  ProbeSource src(q);
  src.enable_trace();
  s.query(src);
  const std::set<std::size_t> seen(src.trace().begin(), src.trace().end());
  CHECK(seen.size() == src.trace().size());
  CHECK(std::includes(allowed.begin(), allowed.end(), seen.begin(), seen.end()));
  CHECK(src.probes() == allowed.size());
}

TEST_CASE("rescaled distances are unbiased") {
  // E ||r_i - u||_1 = T ||c_i - q||_1 and E ||r_i - u||_2^2 = T ||c_i - q||_2^2,
  // recomputed here from the stored samples.
  for (const Metric m : {Metric::l1(), Metric::l2()}) {
    const auto ps = gaussian(5, 80, m, 8);
    Rng rng(9);
    std::vector<double> q(80);
    for (auto& v : q) v = rng.normal();
    const std::uint64_t t = 40;
    const double e = m.exponent();
    double sum = 0;
    const int builds = 300;
    for (int b = 0; b < builds; ++b) {
      auto p = Params::with(0.2, 0.2, 100 + b);
      const auto s = LinearAnn::build(ps, p, with_rounds(t));
      for (const auto& smp : s.samples()) sum += pow_abs(ps.at(0, smp.coordinate) - q[smp.coordinate], e) / smp.probability;
    }
    CHECK(sum / builds == doctest::Approx(t * distance_pow(ps.row(0), q, e)).epsilon(0.1));
  }
}

TEST_CASE("markov overestimate for the nearest center") {
  // (1/T) ||r_* - u||_1 <= (1/delta') ||c_* - q||_1 with delta' = delta/4 fails
  // with probability at most delta'.
  const double delta = 0.2, dp = delta / 4;
  InstanceSpec spec;
  spec.n = 6;
  spec.d = 600;
  spec.seed = 10;
  const auto inst = generate(spec);
  Rng qr(11);
  const auto q = inst.query(qr);
  const auto nn = exact_nn(inst.points, q);
  int violations = 0;
  const int builds = 300;
  for (int b = 0; b < builds; ++b) {
    const auto s = LinearAnn::build(inst.points, Params::with(0.25, delta, 500 + b));
    double est = 0;
    for (const auto& smp : s.samples()) est += std::abs(inst.points.at(nn.index, smp.coordinate) - q[smp.coordinate]) / smp.probability;
    violations += est / static_cast<double>(s.rounds()) > nn.distance / dp;
  }
  CHECK(violations / double(builds) <= dp + 0.05);
}

TEST_CASE("planted instances are answered within 1+eps") {
  for (const Metric m : {Metric::l1(), Metric::l2()}) {
    InstanceSpec spec;
    spec.n = 10;
    spec.d = 2000;
    spec.metric = m;
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
      spec.seed = 1000 + t;
      const auto inst = generate(spec);
      Rng qr(t);
      const auto q = inst.make_query(qr);
      const auto s = LinearAnn::build(inst.points, Params::with(0.25, 0.2, 77 + t));
      ProbeSource src(q.point);
      const auto got = s.query(src);
      ok += approximation_ratio(inst.points, q.point, got) <= 1.25;
      CHECK(s.samples().size() <= 2 * s.rounds() * s.size());
    }
    CHECK(ok / double(trials) >= 0.75);
  }
}

TEST_CASE("serialization round trip") {
  for (const Metric m : {Metric::l1(), Metric::l2()}) {
    const auto ps = gaussian(7, 300, m, 12);
    const auto s = LinearAnn::build(ps, Params::with(0.2, 0.2, 13));
    const auto bytes = s.serialize();
    CHECK(bytes[0] == 'S');
    CHECK(bytes[3] == (m == Metric::l1() ? '1' : '2'));
    const auto back = LinearAnn::deserialize(bytes);
    CHECK(back.serialize() == bytes);
    CHECK(back.rounds() == s.rounds());
    CHECK(back.rows() == s.rows());
    Rng rng(14);
    std::vector<double> q(300);
    for (auto& v : q) v = rng.normal();
    ProbeSource a(q), b(q);
    CHECK(s.query_detailed(a).estimates == back.query_detailed(b).estimates);
    CHECK(a.probes() == b.probes());

    auto cut = bytes;
    cut.resize(bytes.size() - 3);
    CHECK_THROWS(LinearAnn::deserialize(cut));
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS(LinearAnn::deserialize(bad));
  }
  const auto one = LinearAnn::build(PointSet::from_rows({{1.0}}, Metric::l1()), Params{});
  CHECK(LinearAnn::deserialize(one.serialize()).degenerate());
}

TEST_CASE("builds are deterministic in the seed") {
  const auto ps = gaussian(5, 100, Metric::l1(), 15);
  const auto a = LinearAnn::build(ps, Params::with(0.2, 0.2, 5)).serialize();
  const auto b = LinearAnn::build(ps, Params::with(0.2, 0.2, 5)).serialize();
  const auto c = LinearAnn::build(ps, Params::with(0.2, 0.2, 6)).serialize();
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("expected profile on grid data") {
  InstanceSpec spec;
  spec.generator = GeneratorKind::Grid;
  spec.n = 10;
  spec.d = 1000;
  spec.grid_bound = 100;
  spec.seed = 16;
  const auto inst = generate(spec);
  LinearAnnOptions o;
  o.profile = Profile::ExpectedConstant;
  o.grid_bound = 100;
  double ratio = 0;
  const int trials = 50;
  Rng qr(17);
  for (int t = 0; t < trials; ++t) {
    const auto s = LinearAnn::build(inst.points, Params::with(0.25, 0.2, t), o);
    CHECK(s.profile() == Profile::ExpectedConstant);
    const auto q = inst.query(qr);
    ProbeSource src(q);
    ratio += approximation_ratio(inst.points, q, s.query(src));
  }
  CHECK(ratio / trials <= 8.25);
}

TEST_CASE("multiset stays within 2Tn in most builds") {
  experiments::LinearConfig c;
  c.params = Params::with(0.25, 0.2);
  c.seed = 17;
  const auto r = experiments::multiset_bound(c, 200);
  CHECK(r.builds == 200);
  CHECK(r.within >= 190);
}

TEST_CASE("stored words barely depend on d") {
  const auto mean_words = [](std::size_t d) {
    double total = 0;
    for (int t = 0; t < 20; ++t) {
      InstanceSpec spec;
      spec.n = 10;
      spec.d = d;
      spec.seed = 500 + t;
      const auto inst = generate(spec);
      total += static_cast<double>(LinearAnn::build(inst.points, Params::with(0.25, 0.2, t)).space_report().total());
    }
    return total / 20;
  };
  const double ratio = mean_words(100000) / mean_words(10000);
  MESSAGE("words(d=1e5) / words(d=1e4) = " << ratio);
  CHECK(ratio < 1.5);
}
