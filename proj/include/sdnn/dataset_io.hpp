#pragma once

// Dataset files.
//
// Text:   "n d metric [p]" header line, then n lines of d reals.
//         metric is L1, L2 or Lp; p is required for Lp.
// Binary: "SDNN", u32 n, u32 d, u8 metric tag (0 L1, 1 L2, 2 Lp), f64 p,
//         then n*d little-endian f64 in row-major order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sdnn/core.hpp"

namespace sdnn {

void write_text_dataset(std::ostream& out, const PointSet& points);
PointSet read_text_dataset(std::istream& in);

std::vector<std::uint8_t> encode_binary_dataset(const PointSet& points);
PointSet decode_binary_dataset(std::span<const std::uint8_t> bytes);

/// Chooses the format from the leading bytes ("SDNN" means binary).
PointSet load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const PointSet& points, bool binary);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace sdnn
