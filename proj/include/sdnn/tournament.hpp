#pragma once

// Min-finding with imperfect pairwise comparisons.

#include <cstdint>
#include <functional>
#include <span>

namespace sdnn {

enum class Pick : std::uint8_t { First = 0, Second = 1, Unknown = 2 };

/// cmp(i, j) says which of candidates i and j is nearer. The query point is
/// whatever the callable captures.
using CompareFn = std::function<Pick(std::size_t, std::size_t)>;

struct MinFindResult {
  std::size_t index = 0;
  std::uint64_t comparisons = 0;
};

/// max(1, ceil(log2(log2(max(n, 4))))).
unsigned log_log(std::size_t n);

/// Champion scan: the champion starts at indices[0] and is replaced only when
/// cmp(champion, challenger) returns Second. Exactly n-1 comparisons.
MinFindResult scan_min(std::span<const std::size_t> indices, const CompareFn& cmp);

/// Recursive tournament: split into ceil(sqrt|S|) consecutive blocks of
/// ceil(|S|/k) candidates, recurse, then play every pair of block winners.
/// The winner with most wins is returned, ties to the lowest index. Unknown
/// counts for the first argument.
MinFindResult tournament_min(std::span<const std::size_t> indices, const CompareFn& cmp);

}  // namespace sdnn
