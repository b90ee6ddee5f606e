#include <gtest/gtest.h>

#include <set>

#include "fraglab/compositions.hpp"
#include "fraglab/errors.hpp"

using namespace fraglab;
using namespace fraglab::stick;

TEST(Compositions, CountsMatchBinomials) {
  EXPECT_EQ(compositions(3, 2).size(), 4u);
  EXPECT_EQ(compositions(2, 3).size(), 6u);
  const auto zero = compositions(0, 5);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].parts(), std::vector<int>(5, 0));
  for (int m = 1; m <= 5; ++m)
    for (int N = 0; N <= 9; ++N) EXPECT_EQ(compositions(N, m).size(), composition_count(N, m));
}

TEST(Compositions, ColexOrder) {
  const std::vector<std::vector<int>> expected = {{2, 0, 0}, {1, 1, 0}, {0, 2, 0},
                                                  {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  const auto got = compositions(2, 3);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].parts(), expected[i]);
}

TEST(Compositions, EachExactlyOnceAndSumsToN) {
  for (int m = 1; m <= 4; ++m)
    for (int N = 0; N <= 8; ++N) {
      std::set<std::vector<int>> seen;
      for (const auto& c : compositions(N, m)) {
        EXPECT_EQ(c.N(), N);
        EXPECT_TRUE(seen.insert(c.parts()).second);
      }
    }
}

TEST(Compositions, RankRoundTrip) {
  for (int m = 1; m <= 5; ++m)
    for (int N = 0; N <= 7; ++N) {
      std::uint64_t r = 0;
      for (const auto& c : compositions(N, m)) {
        EXPECT_EQ(composition_rank(c), r);
        EXPECT_EQ(unrank_composition(N, m, r), c);
        ++r;
      }
      EXPECT_THROW(unrank_composition(N, m, r), DomainError);
    }
}

TEST(Compositions, CursorResumesMidStream) {
  const auto all = compositions(12, 4);
  for (std::uint64_t start : {0ull, 1ull, 17ull, 200ull, static_cast<unsigned long long>(all.size() - 1)}) {
    CompositionCursor cur(12, 4, start);
    for (std::size_t i = start; i < all.size(); ++i, cur.next()) {
      ASSERT_FALSE(cur.done());
      EXPECT_EQ(cur.current(), all[i]);
    }
    EXPECT_TRUE(cur.done());
  }
}

TEST(Compositions, RejectsBadInput) {
  EXPECT_THROW(Composition({1, -1}), DomainError);
  EXPECT_THROW(Composition({}), DomainError);
  EXPECT_THROW(compositions(-1, 2), DomainError);
  EXPECT_THROW(compositions(3, 0), DomainError);
  EXPECT_THROW(composition_count(100000, 40), CapacityError);
}
