#include "sdnn/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdnn {

unsigned log_log(std::size_t n) {
  const double inner = std::log2(static_cast<double>(std::max<std::size_t>(n, 4)));
  return std::max(1u, static_cast<unsigned>(std::ceil(std::log2(inner))));
}

MinFindResult scan_min(std::span<const std::size_t> indices, const CompareFn& cmp) {
  if (indices.empty()) throw std::invalid_argument("min-finding over an empty set");
  MinFindResult r{indices[0], 0};
  for (std::size_t k = 1; k < indices.size(); ++k) {
    ++r.comparisons;
    if (cmp(r.index, indices[k]) == Pick::Second) r.index = indices[k];
  }
  return r;
}

namespace {

std::size_t ceil_sqrt(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

std::size_t play(std::span<const std::size_t> s, const CompareFn& cmp, std::uint64_t& count) {
  if (s.size() == 1) return s[0];
  if (s.size() == 2) {
    ++count;
    return cmp(s[0], s[1]) == Pick::Second ? s[1] : s[0];
  }
  const std::size_t blocks = ceil_sqrt(s.size());
  const std::size_t width = (s.size() + blocks - 1) / blocks;
  std::vector<std::size_t> winners;
  for (std::size_t start = 0; start < s.size(); start += width)
    winners.push_back(play(s.subspan(start, std::min(width, s.size() - start)), cmp, count));

  std::vector<std::uint64_t> wins(winners.size(), 0);
  for (std::size_t u = 0; u < winners.size(); ++u) {
    for (std::size_t v = u + 1; v < winners.size(); ++v) {
      ++count;
      ++wins[cmp(winners[u], winners[v]) == Pick::Second ? v : u];
    }
  }
  std::size_t best = 0;
  for (std::size_t u = 1; u < winners.size(); ++u) {
    if (wins[u] > wins[best] || (wins[u] == wins[best] && winners[u] < winners[best])) best = u;
  }
  return winners[best];
}

}  // namespace

MinFindResult tournament_min(std::span<const std::size_t> indices, const CompareFn& cmp) {
  if (indices.empty()) throw std::invalid_argument("min-finding over an empty set");
  MinFindResult r;
  r.index = play(indices, cmp, r.comparisons);
  return r;
}

}  // namespace sdnn
