#include "sdnn/dataset_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sdnn/binary_io.hpp"

namespace sdnn {

namespace {

constexpr std::string_view kDatasetMagic = "SDNN";

std::uint8_t metric_tag(const Metric& m) { return static_cast<std::uint8_t>(m.kind()); }

Metric metric_from_tag(std::uint8_t tag, double p) {
  switch (tag) {
    case 0: return Metric::l1();
    case 1: return Metric::l2();
    case 2: return Metric::lp(p);
    default: throw std::runtime_error("unknown metric tag " + std::to_string(tag));
  }
}

}  // namespace

void write_text_dataset(std::ostream& out, const PointSet& points) {
  const auto& m = points.metric();
  out << points.size() << ' ' << points.dim() << ' ';
  switch (m.kind()) {
    case Metric::Kind::L1: out << "L1"; break;
    case Metric::Kind::L2: out << "L2"; break;
    case Metric::Kind::Lp: out << "Lp " << std::setprecision(17) << m.exponent(); break;
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = points.row(i);
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (b) out << ' ';
      out << row[b];
    }
    out << '\n';
  }
}

PointSet read_text_dataset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty dataset");
  std::istringstream hs(header);
  std::size_t n = 0, d = 0;
  std::string metric_name;
  if (!(hs >> n >> d >> metric_name)) throw std::runtime_error("malformed dataset header: '" + header + "'");
  std::optional<double> p;
  double pv = 0;
  if (hs >> pv) p = pv;
  const Metric metric = parse_metric(metric_name, p);
  if (n == 0 || d == 0) throw std::runtime_error("dataset needs n >= 1 and d >= 1");

  std::vector<double> coords;
  coords.reserve(n * d);
  for (std::size_t k = 0; k < n * d; ++k) {
    double v;
    if (!(in >> v)) throw std::runtime_error("dataset has fewer than n*d values");
    coords.push_back(v);
  }
  return PointSet(n, d, std::move(coords), metric);
}

std::vector<std::uint8_t> encode_binary_dataset(const PointSet& points) {
  if (points.size() > std::numeric_limits<std::uint32_t>::max() ||
      points.dim() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("dataset too large for the binary format");
  ByteWriter w;
  w.magic(kDatasetMagic);
  w.u32(static_cast<std::uint32_t>(points.size()));
  w.u32(static_cast<std::uint32_t>(points.dim()));
  w.u8(metric_tag(points.metric()));
  w.f64(points.metric().exponent());
  w.f64s(points.coords());
  return w.take();
}

PointSet decode_binary_dataset(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kDatasetMagic);
  const std::size_t n = r.u32();
  const std::size_t d = r.u32();
  const std::uint8_t tag = r.u8();
  const double p = r.f64();
  const Metric metric = metric_from_tag(tag, p);
  auto coords = r.f64s(n * d);
  r.expect_done();
  return PointSet(n, d, std::move(coords), metric);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

PointSet load_dataset(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() >= 4 && std::equal(kDatasetMagic.begin(), kDatasetMagic.end(), bytes.begin()))
    return decode_binary_dataset(bytes);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  return read_text_dataset(in);
}

void save_dataset(const std::filesystem::path& path, const PointSet& points, bool binary) {
  if (binary) {
    write_file_bytes(path, encode_binary_dataset(points));
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_text_dataset(out, points);
}

}  // namespace sdnn
