#include "formbound/multi_index.hpp"

#include <bit>
#include <string>

#include "formbound/errors.hpp"

namespace formbound {

MultiIndex::MultiIndex(int n, const std::vector<int>& indices) : n_(n) {
  if (n < 0 || n > kMaxDimension) {
    throw DimensionError("MultiIndex: dimension " + std::to_string(n) + " out of range");
  }
  int previous = -1;
  for (int i : indices) {
    if (i < 0 || i >= n) {
      throw DimensionError("MultiIndex: index " + std::to_string(i) + " outside [0, " +
                           std::to_string(n) + ")");
    }
    if (i <= previous) {
      throw DimensionError("MultiIndex: indices must be strictly increasing");
    }
    mask_ |= (1u << i);
    previous = i;
  }
}

MultiIndex MultiIndex::empty(int n) { return MultiIndex(n, {}); }

MultiIndex MultiIndex::from_mask(int n, std::uint32_t mask) {
  if (n < 0 || n > kMaxDimension || (n < 32 && (mask >> n) != 0)) {
    throw DimensionError("MultiIndex: mask does not fit the dimension");
  }
  MultiIndex m;
  m.n_ = n;
  m.mask_ = mask;
  return m;
}

int MultiIndex::degree() const { return std::popcount(mask_); }

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  out.reserve(degree());
  for (int i = 0; i < n_; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

int MultiIndex::count_below(int i) const {
  const std::uint32_t below = i >= 32 ? mask_ : (mask_ & ((1u << i) - 1u));
  return std::popcount(below);
}

std::optional<std::pair<int, MultiIndex>> MultiIndex::prepend(int i) const {
  if (contains(i)) return std::nullopt;
  const int sign = (count_below(i) % 2 == 0) ? 1 : -1;
  return std::make_pair(sign, from_mask(n_, mask_ | (1u << i)));
}

MultiIndex MultiIndex::without(int i) const { return from_mask(n_, mask_ & ~(1u << i)); }

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = n_ <=> other.n_; c != 0) return c;
  if (auto c = degree() <=> other.degree(); c != 0) return c;
  // Lexicographic on sorted tuples: the first differing position decides, and the tuple
  // holding the smaller index at that position is smaller.
  const std::uint32_t diff = mask_ ^ other.mask_;
  if (diff == 0) return std::strong_ordering::equal;
  const int lowest = std::countr_zero(diff);
  return contains(lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::vector<MultiIndex> all_multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(n, idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

int shuffle_sign(const MultiIndex& a, const MultiIndex& b) {
  if ((a.mask() & b.mask()) != 0) return 0;
  // Inversions: pairs (i in a, j in b) with i > j.
  int inversions = 0;
  for (int j : b.indices()) {
    inversions += a.degree() - a.count_below(j + 1);
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace formbound
