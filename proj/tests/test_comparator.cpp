#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sdnn/comparator.hpp"

using namespace sdnn;

namespace {

std::vector<double> normal_vector(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.normal();
  return v;
}

ComparatorOptions fixed_rounds(std::uint64_t t) {
  ComparatorOptions o;
  o.rounds = t;
  return o;
}

}  // namespace

TEST_CASE("truncation threshold") {
  CHECK(truncation_threshold(2, 0.1) == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(truncation_threshold(2, 0) == 0.0);
  CHECK(truncation_threshold(3, 0.1) == doctest::Approx(std::pow(1.1, 1.5) - 1).epsilon(1e-14));
  CHECK(truncation_threshold(3, 0.1) == doctest::Approx(0.153689).epsilon(1e-5));
  CHECK_THROWS(truncation_threshold(1, 0.1));
  CHECK_THROWS(truncation_threshold(0.5, 0.1));
  CHECK_THROWS(truncation_threshold(2, -0.1));
}

TEST_CASE("truncate") {
  CHECK(truncate(0.5, 0, 1) == 0.5);
  CHECK(truncate(-3, 0, 1) == 0);
  CHECK(truncate(9, 0, 1) == 1);
  CHECK(truncate(0, 0, 1) == 0);
  CHECK(truncate(1, 0, 1) == 1);
  CHECK(truncate(5, 2, 2) == 2);
}

TEST_CASE("round count") {
  CHECK(comparator_rounds(1, 0.2, 0.1) == std::ceil(2 * std::log(10.0) * 2 / std::pow(0.2, 3)));
  CHECK(comparator_rounds(3, 0.2, 0.1, 1.0) == std::ceil(std::log(10.0) * 8 / std::pow(0.2, 5)));
  CHECK_THROWS(comparator_rounds(2, 0, 0.1));
  CHECK_THROWS(comparator_rounds(2, 0.1, 1.0));
}

TEST_CASE("build preconditions") {
  Rng rng(1);
  const std::vector<double> a{1, 2}, b{1, 2};
  CHECK_THROWS_WITH(PairComparator::build(a, b, 1, 0.2, 0.1, rng), "zero-distance pair");
  CHECK_THROWS(PairComparator::build(a, std::vector<double>{1}, 1, 0.2, 0.1, rng));
  CHECK_THROWS(PairComparator::build(a, std::vector<double>{0, 0}, 0.5, 0.2, 0.1, rng));
}

TEST_CASE("single differing coordinate takes every draw") {
  Rng rng(2);
  const std::vector<double> a{0, 5, 0}, b{0, 7, 0};
  const auto c = PairComparator::build(a, b, 2, 0.1, 0.1, rng);
  REQUIRE(c.entries().size() == 1);
  CHECK(c.entries()[0].coordinate == 1);
  CHECK(c.entries()[0].count == c.rounds());
}

TEST_CASE("equal weights draw uniformly") {
  Rng rng(3);
  const std::vector<double> a{0, 0}, b{1, 1};
  const auto c = PairComparator::build(a, b, 1, 0.2, 0.1, rng, fixed_rounds(10000));
  REQUIRE(c.entries().size() == 2);
  for (const auto& e : c.entries()) CHECK(std::abs(e.count / 10000.0 - 0.5) < 0.05);
}

TEST_CASE("draw frequencies match |b_i - a_i|^p weights") {
  Rng rng(4);
  for (double p : {1.0, 2.0, 3.0}) {
    const auto a = normal_vector(rng, 8), b = normal_vector(rng, 8);
    const std::uint64_t t = 10000;
    const auto c = PairComparator::build(a, b, p, 0.2, 0.1, rng, fixed_rounds(t));
    double total = 0;
    for (std::size_t i = 0; i < 8; ++i) total += std::pow(std::abs(b[i] - a[i]), p);
    std::uint64_t drawn = 0;
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const auto& e : c.entries()) {
      counts[e.coordinate] = e.count;
      drawn += e.count;
    }
    CHECK(drawn == t);
    for (std::size_t i = 0; i < 8; ++i) {
      const double want = std::pow(std::abs(b[i] - a[i]), p) / total;
      CHECK(std::abs(static_cast<double>(counts[i]) / t - want) <= 0.05);
    }
  }
}

TEST_CASE("truncation intervals") {
  Rng rng(5);
  const std::vector<double> a{0, 3}, b{2, 1};
  const auto c1 = PairComparator::build(a, b, 1, 0.2, 0.1, rng, fixed_rounds(100));
  for (const auto& e : c1.entries()) {
    CHECK(e.lo == std::min(e.a, e.b));
    CHECK(e.hi == std::max(e.a, e.b));
  }
  const double m = truncation_threshold(2, 0.2);
  const auto c2 = PairComparator::build(a, b, 2, 0.2, 0.1, rng, fixed_rounds(100));
  for (const auto& e : c2.entries()) {
    // Oriented form: l = a - (b - a)/m, u = a + (1 + 1/m)(b - a).
    const double l = e.a - (e.b - e.a) / m, u = e.a + (1 + 1 / m) * (e.b - e.a);
    CHECK(e.lo == doctest::Approx(std::min(l, u)).epsilon(1e-12));
    CHECK(e.hi == doctest::Approx(std::max(l, u)).epsilon(1e-12));
  }
}

TEST_CASE("query at a gives zero x") {
  Rng rng(6);
  const auto a = normal_vector(rng, 20), b = normal_vector(rng, 20);
  for (double p : {1.0, 2.0, 3.0}) {
    const auto c = PairComparator::build(a, b, p, 0.1, 0.1, rng);
    for (Rule rule : {Rule::TwoWay, Rule::ThreeWay}) {
      ProbeSource src(a);
      const auto out = c.compare(src, rule);
      CHECK(out.x == 0.0);
      CHECK(out.decision == Decision::NearerA);
      CHECK(src.probes() == c.distinct_coordinates());
    }
  }
}

TEST_CASE("midpoint query is a tie") {
  Rng rng(7);
  const std::vector<double> a(6, 0.0), b(6, 1.0), q(6, 0.5);
  const auto c = PairComparator::build(a, b, 1, 0.2, 0.1, rng);
  ProbeSource s1(q), s2(q);
  const auto two = c.compare(s1, Rule::TwoWay);
  CHECK(two.x == two.y);
  CHECK(two.decision == Decision::NearerA);
  CHECK(c.compare(s2, Rule::ThreeWay).decision == Decision::Unknown);
}

TEST_CASE("estimator terms stay in range") {
  Rng rng(8);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double eps = 0.2, bound = std::pow(1 + 1 / eps, p);
    for (int t = 0; t < 50; ++t) {
      const auto a = normal_vector(rng, 15), b = normal_vector(rng, 15);
      auto q = normal_vector(rng, 15);
      for (auto& v : q) v *= 10;
      const auto c = PairComparator::build(a, b, p, eps, 0.1, rng, fixed_rounds(500));
      ProbeSource src(q);
      for (const auto& term : c.terms(src)) {
        CHECK(term.x >= 0);
        CHECK(term.y >= 0);
        CHECK(term.x <= bound);
        CHECK(term.y <= bound);
      }
    }
  }
}

TEST_CASE("swapping the pair swaps the decision") {
  Rng rng(9);
  for (double p : {1.0, 2.0, 3.0}) {
    for (int t = 0; t < 30; ++t) {
      const auto a = normal_vector(rng, 25), b = normal_vector(rng, 25);
      std::vector<double> q(25);
      const double lambda = rng.uniform();
      for (std::size_t i = 0; i < 25; ++i) q[i] = lambda * a[i] + (1 - lambda) * b[i] + 0.3 * rng.normal();
      const Metric m = Metric::lp(p);
      const double ratio = distance(a, q, m) / distance(b, q, m);
      if (ratio < 1.5 && ratio > 1 / 1.5) continue;
      Rng r1(t), r2(t);
      const auto ab = PairComparator::build(a, b, p, 0.2, 0.01, r1);
      const auto ba = PairComparator::build(b, a, p, 0.2, 0.01, r2);
      ProbeSource s1(q), s2(q);
      const auto d1 = ab.compare(s1, Rule::TwoWay).decision, d2 = ba.compare(s2, Rule::TwoWay).decision;
      CHECK(d1 != d2);
    }
  }
}

TEST_CASE("three-way rule is sound inside the scaled box") {
  // With b at least as far as a and q inside the box, the answer is a or unknown.
  Rng rng(10);
  const double delta = 0.1;
  int sound = 0, trials = 0;
  ComparatorOptions warm;
  warm.truncated = false;
  while (trials < 300) {
    const auto a = normal_vector(rng, 20), b = normal_vector(rng, 20);
    std::vector<double> q(20);
    for (std::size_t i = 0; i < 20; ++i) q[i] = a[i] + rng.normal() * rng.uniform(0.1, 2.0);
    if (distance(b, q, Metric::l1()) < distance(a, q, Metric::l1())) continue;
    if (!in_scaled_bounding_box(a, b, q)) continue;
    ++trials;
    const auto c = PairComparator::build(a, b, 1, 0.2, delta, rng, warm);
    CHECK_FALSE(c.truncated());
    ProbeSource src(q);
    sound += c.compare(src, Rule::ThreeWay).decision != Decision::NearerB;
  }
  CHECK(sound / 300.0 >= 1 - delta - 0.05);
}

TEST_CASE("scaled bounding box membership") {
  const std::vector<double> a{0, 0}, b{1, 0};
  CHECK(in_scaled_bounding_box(a, b, std::vector<double>{100, 0}));
  CHECK(in_scaled_bounding_box(a, b, std::vector<double>{-100, 0}));
  CHECK_FALSE(in_scaled_bounding_box(a, b, std::vector<double>{101.5, 0}));
  CHECK_FALSE(in_scaled_bounding_box(a, b, std::vector<double>{0, 0.1}));
  CHECK(in_scaled_bounding_box(a, b, std::vector<double>{0.5, 0}, 0.0));
}

TEST_CASE("trivial comparator") {
  const auto c = PairComparator::trivial(2, 0.1);
  CHECK(c.is_trivial());
  const std::vector<double> q{1, 2};
  ProbeSource src(q);
  CHECK(c.compare(src, Rule::ThreeWay).decision == Decision::NearerA);
  CHECK(src.probes() == 0);
}

TEST_CASE("serialization") {
  Rng rng(11);
  const auto a = normal_vector(rng, 30), b = normal_vector(rng, 30);
  const auto c = PairComparator::build(a, b, 2.5, 0.1, 0.1, rng);
  ByteWriter w;
  c.write(w);
  PairComparator::trivial(1, 0.1).write(w);
  const auto bytes = w.take();
  ByteReader r(bytes);
  const auto back = PairComparator::read(r);
  const auto triv = PairComparator::read(r);
  CHECK(r.done());
  CHECK(triv.is_trivial());
  CHECK(back.rounds() == c.rounds());
  CHECK(back.entries().size() == c.entries().size());
  ByteWriter again;
  back.write(again);
  triv.write(again);
  CHECK(again.bytes() == bytes);
  CHECK(c.words() == 6 * c.entries().size() + 3);
}

TEST_CASE("unknown only comes from the three-way rule") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto a = normal_vector(rng, 10), b = normal_vector(rng, 10);
    std::vector<double> q(10);
    for (std::size_t i = 0; i < 10; ++i) q[i] = 0.5 * (a[i] + b[i]) + 0.05 * rng.normal();
    const auto c = PairComparator::build(a, b, 1.0 + rng.uniform() * 2, 0.2, 0.1, rng, fixed_rounds(50));
    ProbeSource src(q);
    CHECK(c.compare(src, Rule::TwoWay).decision != Decision::Unknown);
  }
}
