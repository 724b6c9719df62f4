#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace formbound {

/// Strictly increasing index tuple j1 < ... < jk addressing one component
/// dx_{j1} ^ ... ^ dx_{jk} of a k-form on R^n.
///
/// Positions are zero-based in code (0..n-1); the text format prints them one-based.
/// Stored as a bit set, so n is limited to 32.
class MultiIndex {
 public:
  static constexpr int kMaxDimension = 32;

  MultiIndex() = default;
  /// Throws DimensionError for out-of-range or repeated/unsorted entries.
  MultiIndex(int n, const std::vector<int>& indices);

  static MultiIndex empty(int n);
  static MultiIndex from_mask(int n, std::uint32_t mask);

  int dimension() const { return n_; }
  int degree() const;
  std::uint32_t mask() const { return mask_; }
  bool contains(int i) const { return (mask_ >> i) & 1u; }
  std::vector<int> indices() const;

  /// Number of entries strictly smaller than i.
  int count_below(int i) const;

  /// dx_i ^ dx_J = sign * dx_{J + i}; nullopt when i is already in J.
  std::optional<std::pair<int, MultiIndex>> prepend(int i) const;
  /// J with entry i removed.
  MultiIndex without(int i) const;

  /// Lexicographic on the sorted index tuples; indices of different degree order by degree.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

 private:
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

/// All multi-indices of degree k on R^n in lexicographic order.
std::vector<MultiIndex> all_multi_indices(int n, int k);

/// Sign of the permutation sorting the concatenation (a, b); 0 when a and b overlap.
int shuffle_sign(const MultiIndex& a, const MultiIndex& b);

}  // namespace formbound
