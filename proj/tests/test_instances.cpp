#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <set>

#include "sdnn/dataset_io.hpp"
#include "sdnn/instances.hpp"
#include "sdnn/oracle.hpp"

using namespace sdnn;

namespace {

InstanceSpec make(GeneratorKind g, std::size_t n, std::size_t d, Metric m = Metric::l1()) {
  InstanceSpec s;
  s.generator = g;
  s.n = n;
  s.d = d;
  s.metric = m;
  return s;
}

}  // namespace

TEST_CASE("generator names round trip") {
  for (auto g : {GeneratorKind::Gaussian, GeneratorKind::BooleanCube, GeneratorKind::UnitVectors,
                 GeneratorKind::PlantedNN, GeneratorKind::Grid, GeneratorKind::FromFile})
    CHECK(parse_generator(generator_name(g)) == g);
  CHECK(parse_generator("Planted-NN") == GeneratorKind::PlantedNN);
  CHECK_FALSE(parse_generator("uniform").has_value());
}

TEST_CASE("block sizes") {
  CHECK(block_sizes(10, 3) == std::vector<std::size_t>{4, 3, 3});
  CHECK(block_sizes(9, 3) == std::vector<std::size_t>{3, 3, 3});
}

TEST_CASE("planted query distances") {
  for (double p : {1.0, 2.0, 3.0}) {
    auto spec = make(GeneratorKind::PlantedNN, 7, 100, Metric::lp(p));
    spec.gap = 2.5;
    const auto inst = generate(spec);
    Rng rng(1);
    for (int t = 0; t < 30; ++t) {
      const auto q = inst.make_query(rng);
      REQUIRE(q.planted.has_value());
      const auto ds = all_distances(inst.points, q.point);
      CHECK(ds[*q.planted] == doctest::Approx(1.0).epsilon(1e-9));
      for (std::size_t j = 0; j < ds.size(); ++j)
        if (j != *q.planted) CHECK(ds[j] >= 2.5 - 1e-9);
    }
  }
}

TEST_CASE("unit vectors") {
  const auto inst = generate(make(GeneratorKind::UnitVectors, 4, 6));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t b = 0; b < 6; ++b) CHECK(inst.points.at(i, b) == (i == b ? 1.0 : 0.0));
  Rng rng(2);
  const auto q = inst.make_query(rng);
  CHECK(exact_nn(inst.points, q.point).index == *q.planted);
}

TEST_CASE("boolean cube points are distinct") {
  for (std::size_t d : {4u, 40u}) {
    const auto inst = generate(make(GeneratorKind::BooleanCube, 16, d));
    std::set<std::vector<double>> rows;
    for (std::size_t i = 0; i < 16; ++i) {
      const auto r = inst.points.row(i);
      for (double v : r) CHECK((v == 0.0 || v == 1.0));
      rows.emplace(r.begin(), r.end());
    }
    CHECK(rows.size() == 16);
  }
  CHECK_THROWS(generate(make(GeneratorKind::BooleanCube, 17, 4)));
}

TEST_CASE("grid values are bounded integers") {
  auto spec = make(GeneratorKind::Grid, 5, 50);
  spec.grid_bound = 3.7;
  const auto inst = generate(spec);
  for (double v : inst.points.coords()) {
    CHECK(v == std::floor(v));
    CHECK(std::abs(v) <= 3.0);
  }
  Rng rng(3);
  for (double v : inst.query(rng)) CHECK(std::abs(v) <= 3.0);
  spec.grid_bound = 0.5;
  CHECK_THROWS(generate(spec));
}

TEST_CASE("invalid specs") {
  auto s = make(GeneratorKind::PlantedNN, 10, 5);
  CHECK_THROWS(generate(s));
  s.d = 50;
  s.gap = 0.5;
  CHECK_THROWS(generate(s));
  CHECK_THROWS(generate(make(GeneratorKind::UnitVectors, 10, 5)));
  CHECK_THROWS(generate(make(GeneratorKind::Gaussian, 0, 5)));
}

TEST_CASE("generation is deterministic in the seed") {
  auto s = make(GeneratorKind::Gaussian, 3, 8);
  s.seed = 42;
  const auto a = generate(s), b = generate(s);
  CHECK(std::vector<double>(a.points.coords().begin(), a.points.coords().end()) ==
        std::vector<double>(b.points.coords().begin(), b.points.coords().end()));
  s.seed = 43;
  const auto c = generate(s);
  CHECK(c.points.at(0, 0) != a.points.at(0, 0));
}

TEST_CASE("from-file queries mix two centers") {
  const auto path = std::filesystem::temp_directory_path() / "sdnn_instances_test.txt";
  save_dataset(path, PointSet::from_rows({{0, 0, 0, 0}, {1, 1, 1, 1}}, Metric::l1()), false);
  auto s = make(GeneratorKind::FromFile, 0, 0);
  s.path = path;
  const auto inst = generate(s);
  CHECK(inst.points.size() == 2);
  Rng rng(4);
  for (int t = 0; t < 20; ++t)
    for (double v : inst.query(rng)) CHECK((v == 0.0 || v == 1.0));
  std::filesystem::remove(path);
}
