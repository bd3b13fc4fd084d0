#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sdnn/oracle.hpp"
#include "sdnn/range_search.hpp"

using namespace sdnn;

namespace {

PointSet gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(n * d);
  for (auto& x : c) x = rng.normal();
  return PointSet(n, d, std::move(c), Metric::l1());
}

}  // namespace

TEST_CASE("round count") {
  const auto p = Params::with(0.25, 0.1);
  CHECK(range_rounds(10, p) == static_cast<std::uint64_t>(std::ceil(2 * std::log(100.0) / 0.25)));
  auto q = p;
  q.rounds_constant = 1.0;
  CHECK(range_rounds(10, q) == static_cast<std::uint64_t>(std::ceil(std::log(100.0) / 0.25)));
}

TEST_CASE("preconditions") {
  CHECK_THROWS(RangeSearch::build(gaussian(3, 4, 1).with_metric(Metric::l2()), Params::with(0.2, 0.1)));
  CHECK_THROWS(RangeSearch::build(PointSet::from_rows({{1, 1}, {1, 1}}, Metric::l1()), Params::with(0.2, 0.1)));
  CHECK_THROWS(RangeSearch::build(gaussian(3, 4, 1), Params::with(0.2, 0)));
  const auto s = RangeSearch::build(gaussian(3, 4, 1), Params::with(0.2, 0.1));
  const std::vector<double> q(5, 0.0), r(4, 0.0);
  ProbeSource a(q), b(r);
  CHECK_THROWS(s.query(a, b));
}

TEST_CASE("stored values are the centers on the sampled coordinates") {
  const auto pts = gaussian(6, 200, 2);
  const auto s = RangeSearch::build(pts, Params::with(0.2, 0.1, 5));
  CHECK(std::is_sorted(s.coordinates().begin(), s.coordinates().end()));
  CHECK(std::adjacent_find(s.coordinates().begin(), s.coordinates().end()) == s.coordinates().end());
  CHECK(s.coordinates().size() <= s.multiset_size());
  for (std::size_t i = 0; i < 6; ++i) {
    const auto st = s.stored(i);
    for (std::size_t j = 0; j < st.size(); ++j) CHECK(st[j] == pts.at(i, s.coordinates()[j]));
  }
  const auto sp = s.space_report();
  CHECK(sp.part("indices") == s.coordinates().size());
  CHECK(sp.part("stored_coordinates") == 6 * s.coordinates().size());
}

TEST_CASE("centers inside the box are always reported") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto pts = gaussian(8, 50, 100 + t);
    std::vector<double> q1(50), q2(50);
    for (std::size_t b = 0; b < 50; ++b) {
      q1[b] = rng.normal() * 2;
      q2[b] = rng.normal() * 2;
    }
    const auto s = RangeSearch::build(pts, Params::with(0.25, 0.1, t));
    ProbeSource a(q1), b(q2);
    const auto got = s.query(a, b);
    for (auto i : exact_range(pts, q1, q2)) CHECK(std::binary_search(got.begin(), got.end(), i));
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(a.probes() == s.coordinates().size());
  }
}

TEST_CASE("box containing everything reports everything") {
  const auto pts = gaussian(5, 30, 4);
  const auto s = RangeSearch::build(pts, Params::with(0.2, 0.1));
  const std::vector<double> lo(30, -100.0), hi(30, 100.0);
  ProbeSource a(hi), b(lo);
  CHECK(s.query(a, b).size() == 5);
}

TEST_CASE("a far center is usually excluded") {
  // Center 1 sits outside the box on a fifth of the coordinates by the full
  // span, so the box distance is large compared with eps times the diameter.
  const std::size_t d = 500;
  std::size_t excluded = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    std::vector<std::vector<double>> rows(4, std::vector<double>(d));
    for (auto& r : rows)
      for (auto& x : r) x = rng.uniform();
    std::vector<double> q1(d, 0.0), q2(d, 1.0);
    for (std::size_t b = 0; b < d / 5; ++b) rows[1][b] = 2.0;
    const auto pts = PointSet::from_rows(rows, Metric::l1());
    const auto s = RangeSearch::build(pts, Params::with(0.25, 0.1, t));
    ProbeSource a(q1), b(q2);
    const auto got = s.query(a, b);
    CHECK(got.size() >= 3);
    excluded += !std::binary_search(got.begin(), got.end(), std::size_t{1});
  }
  CHECK(excluded >= 0.9 * trials);
}

TEST_CASE("serialization round trip") {
  const auto pts = gaussian(5, 40, 5);
  const auto s = RangeSearch::build(pts, Params::with(0.2, 0.1, 9));
  const auto bytes = s.serialize();
  const auto back = RangeSearch::deserialize(bytes);
  CHECK(back.serialize() == bytes);
  CHECK(back.rounds() == s.rounds());
  auto bad = bytes;
  bad.resize(bad.size() - 3);
  CHECK_THROWS(RangeSearch::deserialize(bad));
}

TEST_CASE("rounds override") {
  RangeOptions o;
  o.rounds = 0;
  const auto s = RangeSearch::build(gaussian(4, 20, 6), Params::with(0.2, 0.1), o);
  CHECK(s.coordinates().empty());
  const std::vector<double> q(20, 50.0);
  ProbeSource a(q), b(q);
  CHECK(s.query(a, b).size() == 4);
}

TEST_CASE("enlarging the box never drops a center") {
  Rng rng(20);
  const auto pts = gaussian(10, 60, 21);
  const auto s = RangeSearch::build(pts, Params::with(0.25, 0.1, 22));
  for (int t = 0; t < 200; ++t) {
    std::vector<double> lo(60), hi(60);
    for (std::size_t b = 0; b < 60; ++b) {
      lo[b] = rng.normal() - 0.5;
      hi[b] = lo[b] + rng.uniform(0, 3);
    }
    ProbeSource a(lo), b(hi);
    const auto small = s.query(a, b);
    for (std::size_t k = 0; k < 60; ++k) {
      lo[k] -= rng.uniform(0, 1);
      hi[k] += rng.uniform(0, 1);
    }
    ProbeSource c(lo), d(hi);
    const auto big = s.query(c, d);
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  }
}

TEST_CASE("boundary counts as inside") {
  const auto pts = PointSet::from_rows({{0, 1}, {2, 3}}, Metric::l1());
  const auto s = RangeSearch::build(pts, Params::with(0.2, 0.1));
  const std::vector<double> q1{0, 1}, q2{2, 3};
  ProbeSource a(q1), b(q2);
  CHECK(s.query(a, b) == std::vector<std::size_t>{0, 1});
}
