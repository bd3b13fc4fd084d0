#include "sdnn/instances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sdnn/dataset_io.hpp"

namespace sdnn {

namespace {

double norm(std::span<const double> v, double p) {
  double s = 0.0;
  for (double x : v) s += pow_abs(x, p);
  return std::pow(s, 1.0 / p);
}

GeneratedInstance gaussian(const InstanceSpec& spec, Rng& rng) {
  std::vector<double> coords(spec.n * spec.d);
  for (auto& v : coords) v = rng.normal();
  const std::size_t d = spec.d;
  return {PointSet(spec.n, d, std::move(coords), spec.metric), [d](Rng& r) {
            PlantedQuery q{std::vector<double>(d), std::nullopt};
            for (auto& v : q.point) v = r.normal();
            return q;
          }};
}

GeneratedInstance boolean_cube(const InstanceSpec& spec, Rng& rng) {
  if (spec.d < 64 && spec.n > (std::uint64_t{1} << spec.d)) throw std::invalid_argument("n exceeds 2^d cube points");
  std::vector<double> coords;
  coords.reserve(spec.n * spec.d);
  if (spec.d <= 16) {
    std::vector<std::uint64_t> all(std::uint64_t{1} << spec.d);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < spec.n; ++i) {
      std::swap(all[i], all[i + rng.below(all.size() - i)]);
      for (std::size_t b = 0; b < spec.d; ++b) coords.push_back(static_cast<double>((all[i] >> b) & 1));
    }
  } else {
    std::set<std::vector<bool>> seen;
    while (seen.size() < spec.n) {
      std::vector<bool> bits(spec.d);
      for (std::size_t b = 0; b < spec.d; ++b) bits[b] = rng.bernoulli(0.5);
      if (!seen.insert(bits).second) continue;
      for (bool bit : bits) coords.push_back(bit ? 1.0 : 0.0);
    }
  }
  const std::size_t d = spec.d;
  return {PointSet(spec.n, d, std::move(coords), spec.metric), [d](Rng& r) {
            PlantedQuery q{std::vector<double>(d), std::nullopt};
            for (auto& v : q.point) v = r.bernoulli(0.5) ? 1.0 : 0.0;
            return q;
          }};
}

GeneratedInstance unit_vectors(const InstanceSpec& spec) {
  if (spec.d < spec.n) throw std::invalid_argument("unit-vectors needs d >= n");
  std::vector<double> coords(spec.n * spec.d, 0.0);
  for (std::size_t i = 0; i < spec.n; ++i) coords[i * spec.d + i] = 1.0;
  const std::size_t n = spec.n, d = spec.d;
  return {PointSet(n, d, std::move(coords), spec.metric), [n, d](Rng& r) {
            const std::size_t k = r.below(n);
            PlantedQuery q{std::vector<double>(d, 0.0), k};
            q.point[k] = 0.5;
            return q;
          }};
}

GeneratedInstance planted(const InstanceSpec& spec, Rng& rng) {
  if (!(spec.gap >= 1.0)) throw std::invalid_argument("planted-nn gap must be at least 1");
  if (spec.d < spec.n) throw std::invalid_argument("planted-nn needs d >= n");
  const std::size_t n = spec.n, d = spec.d;
  const double p = spec.metric.exponent();

  auto sizes = block_sizes(d, n);
  auto starts = std::make_shared<std::vector<std::size_t>>(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) (*starts)[i + 1] = (*starts)[i] + sizes[i];

  auto base = std::make_shared<std::vector<double>>(d);
  for (auto& v : *base) v = rng.normal();
  std::vector<double> coords;
  coords.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (*starts)[i], hi = (*starts)[i + 1];
    std::vector<double> v(hi - lo);
    double len = 0.0;
    while (len == 0.0) {
      for (auto& x : v) x = rng.normal();
      len = norm(v, p);
    }
    std::vector<double> row = *base;
    for (std::size_t b = lo; b < hi; ++b) row[b] += spec.gap * v[b - lo] / len;
    coords.insert(coords.end(), row.begin(), row.end());
  }
  PointSet points(n, d, std::move(coords), spec.metric);
  auto centers = std::make_shared<PointSet>(points);

  return {std::move(points), [n, p, base, starts, centers](Rng& r) {
            const std::size_t k = r.below(n);
            const std::size_t lo = (*starts)[k], hi = (*starts)[k + 1];
            std::vector<double> u(hi - lo);
            for (std::size_t b = lo; b < hi; ++b) u[b - lo] = (centers->at(k, b) - (*base)[b]) * r.uniform(0.5, 1.5);
            const double len = norm(u, p);
            PlantedQuery q{*base, k};
            for (std::size_t b = lo; b < hi; ++b) q.point[b] = centers->at(k, b) - u[b - lo] / len;
            return q;
          }};
}

GeneratedInstance grid(const InstanceSpec& spec, Rng& rng) {
  const double bound = std::floor(spec.grid_bound);
  if (!(bound >= 1.0)) throw std::invalid_argument("grid bound must be at least 1");
  const auto span = static_cast<std::uint64_t>(2 * bound + 1);
  std::vector<double> coords(spec.n * spec.d);
  for (auto& v : coords) v = static_cast<double>(rng.below(span)) - bound;
  PointSet points(spec.n, spec.d, std::move(coords), spec.metric);
  auto centers = std::make_shared<PointSet>(points);
  return {std::move(points), [centers, span, bound](Rng& r) {
            const std::size_t k = r.below(centers->size());
            const auto row = centers->row(k);
            PlantedQuery q{std::vector<double>(row.begin(), row.end()), std::nullopt};
            for (auto& v : q.point)
              if (r.bernoulli(0.5)) v = static_cast<double>(r.below(span)) - bound;
            return q;
          }};
}

GeneratedInstance from_file(const InstanceSpec& spec) {
  PointSet points = load_dataset(spec.path);
  auto centers = std::make_shared<PointSet>(points);
  return {std::move(points), [centers](Rng& r) {
            const std::size_t k = r.below(centers->size());
            const std::size_t other = r.below(centers->size());
            const auto row = centers->row(k);
            PlantedQuery q{std::vector<double>(row.begin(), row.end()), std::nullopt};
            for (std::size_t b = 0; b < q.point.size(); ++b)
              if (r.bernoulli(0.1)) q.point[b] = centers->at(other, b);
            return q;
          }};
}

}  // namespace

std::optional<GeneratorKind> parse_generator(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "gaussian") return GeneratorKind::Gaussian;
  if (s == "boolean-cube") return GeneratorKind::BooleanCube;
  if (s == "unit-vectors") return GeneratorKind::UnitVectors;
  if (s == "planted-nn") return GeneratorKind::PlantedNN;
  if (s == "grid") return GeneratorKind::Grid;
  if (s == "from-file") return GeneratorKind::FromFile;
  return std::nullopt;
}

std::string generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::BooleanCube: return "boolean-cube";
    case GeneratorKind::UnitVectors: return "unit-vectors";
    case GeneratorKind::PlantedNN: return "planted-nn";
    case GeneratorKind::Grid: return "grid";
    case GeneratorKind::FromFile: return "from-file";
  }
  return "unknown";
}

std::vector<std::size_t> block_sizes(std::size_t d, std::size_t n) {
  std::vector<std::size_t> sizes(n, d / n);
  for (std::size_t i = 0; i < d % n; ++i) ++sizes[i];
  return sizes;
}

GeneratedInstance generate(const InstanceSpec& spec) {
  if (spec.generator == GeneratorKind::FromFile) return from_file(spec);
  if (spec.n == 0 || spec.d == 0) throw std::invalid_argument("n and d must be positive");
  Rng rng(spec.seed);
  switch (spec.generator) {
    case GeneratorKind::Gaussian: return gaussian(spec, rng);
    case GeneratorKind::BooleanCube: return boolean_cube(spec, rng);
    case GeneratorKind::UnitVectors: return unit_vectors(spec);
    case GeneratorKind::PlantedNN: return planted(spec, rng);
    case GeneratorKind::Grid: return grid(spec, rng);
    default: break;
  }
  throw std::invalid_argument("unknown generator");
}

}  // namespace sdnn
