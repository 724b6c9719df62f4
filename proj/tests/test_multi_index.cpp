#include <gtest/gtest.h>

#include "formbound/errors.hpp"
#include "formbound/multi_index.hpp"
#include "oracles.hpp"

using namespace formbound;

TEST(MultiIndex, RejectsBadIndices) {
  EXPECT_THROW(MultiIndex(3, {2, 1}), DimensionError);
  EXPECT_THROW(MultiIndex(3, {1, 1}), DimensionError);
  EXPECT_THROW(MultiIndex(3, {3}), DimensionError);
  EXPECT_THROW(MultiIndex(3, {-1}), DimensionError);
}

TEST(MultiIndex, EnumerationCountsAndOrder) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto all = all_multi_indices(n, k);
      long expected = 1;
      for (int i = 0; i < k; ++i) expected = expected * (n - i) / (i + 1);
      ASSERT_EQ(static_cast<long>(all.size()), expected);
      for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1], all[i]);
      for (const auto& J : all) EXPECT_EQ(J.degree(), k);
    }
  }
  const auto two = all_multi_indices(3, 2);
  EXPECT_EQ(two[0].indices(), (std::vector<int>{0, 1}));
  EXPECT_EQ(two[1].indices(), (std::vector<int>{0, 2}));
  EXPECT_EQ(two[2].indices(), (std::vector<int>{1, 2}));
}

TEST(MultiIndex, ShuffleSignMatchesPermutationOracle) {
  for (int n = 1; n <= 5; ++n) {
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        const auto A = MultiIndex::from_mask(n, a);
        const auto B = MultiIndex::from_mask(n, b);
        std::vector<int> seq = A.indices();
        const auto rest = B.indices();
        seq.insert(seq.end(), rest.begin(), rest.end());
        EXPECT_EQ(shuffle_sign(A, B), oracle::permutation_sign(seq));
      }
    }
  }
}

TEST(MultiIndex, PrependSign) {
  const MultiIndex J(4, {0, 2});
  auto r = J.prepend(3);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, 1);  // dx4 ^ dx1 ^ dx3 = + dx1 ^ dx3 ^ dx4
  EXPECT_EQ(r->second, MultiIndex(4, {0, 2, 3}));
  r = J.prepend(1);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, -1);
  EXPECT_FALSE(J.prepend(2));
  EXPECT_EQ(J.without(0), MultiIndex(4, {2}));
}
