#pragma once

// Synthetic datasets with query factories.
//
//   gaussian      i.i.d. N(0,1) centers and queries
//   boolean-cube  distinct points of {0,1}^d, random cube queries
//   unit-vectors  c_i = e_i, queries q = e_k / 2
//   planted-nn    each center owns a block of coordinates; a query sits at
//                 distance exactly 1 from one center and >= gap from the rest
//   grid          integer centers in [-D, D]^d; a query is a center with
//                 about half its coordinates redrawn from the grid
//   from-file     a stored dataset; a query is a center with a tenth of its
//                 coordinates copied from another center

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdnn/core.hpp"

namespace sdnn {

enum class GeneratorKind : std::uint8_t { Gaussian, BooleanCube, UnitVectors, PlantedNN, Grid, FromFile };

std::optional<GeneratorKind> parse_generator(std::string_view name);
std::string generator_name(GeneratorKind kind);

struct InstanceSpec {
  GeneratorKind generator = GeneratorKind::PlantedNN;
  std::size_t n = 10;
  std::size_t d = 100;
  Metric metric = Metric::l1();
  double gap = 2.0;          // planted-nn: runner-up distance lower bound
  double grid_bound = 100;   // grid: coordinate bound D
  std::uint64_t seed = 0;
  std::filesystem::path path;  // from-file
};

struct PlantedQuery {
  std::vector<double> point;
  std::optional<std::size_t> planted;  // designated nearest center, when known
};

struct GeneratedInstance {
  PointSet points;
  std::function<PlantedQuery(Rng&)> make_query;

  std::vector<double> query(Rng& rng) const { return make_query(rng).point; }
};

/// Deterministic in spec.seed. Throws std::invalid_argument on inconsistent
/// specs: n or d zero, gap < 1, n > 2^d for the cube, d < n for planted-nn
/// and unit-vectors, non-positive grid bound.
GeneratedInstance generate(const InstanceSpec& spec);

/// Sizes of n consecutive blocks covering d coordinates; the first d mod n
/// blocks are one longer.
std::vector<std::size_t> block_sizes(std::size_t d, std::size_t n);

}  // namespace sdnn
