#include <gtest/gtest.h>

#include <vector>

#include "pipowers/combinatorics.hpp"

using namespace pipowers;

namespace {

MultiIndex mi(std::vector<unsigned> m) { return MultiIndex(std::move(m)); }

// Independent brute force: every tuple 0 <= m_j <= k/j with sum j m_j = k.
std::vector<std::vector<unsigned>> brute_force(unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> m(k, 0);
  for (;;) {
    unsigned w = 0;
    for (unsigned j = 0; j < k; ++j) w += (j + 1) * m[j];
    if (w == k) out.push_back(m);
    unsigned j = 0;
    while (j < k && ++m[j] > k / (j + 1)) m[j++] = 0;
    if (j == k) break;
  }
  return out;
}

std::vector<Integer> partition_numbers(unsigned n) {
  // Euler's pentagonal recurrence.
  std::vector<Integer> p(n + 1, 0);
  p[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    for (long i = 1;; ++i) {
      for (long g : {i * (3 * i - 1) / 2, i * (3 * i + 1) / 2}) {
        if (g > static_cast<long>(m)) continue;
        p[m] += (i % 2 ? 1 : -1) * p[m - static_cast<unsigned>(g)];
      }
      if (i * (3 * i - 1) / 2 > static_cast<long>(m)) break;
    }
  }
  return p;
}

}  // namespace

TEST(Enumerate, OrderOneIsSingleton) {
  auto list = enumerate_multi_indices(1);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0], mi({1}));
}

TEST(Enumerate, OrderTwoListsBothPairs) {
  auto list = enumerate_multi_indices(2);
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0], mi({2, 0}));
  EXPECT_EQ(list[1], mi({0, 1}));
}

TEST(Enumerate, OrderFiveHasSevenIndicesMatchingBruteForce) {
  auto list = enumerate_multi_indices(5);
  EXPECT_EQ(list.size(), 7u);
  auto brute = brute_force(5);
  ASSERT_EQ(brute.size(), 7u);
  for (const auto& m : brute) EXPECT_NE(std::find(list.begin(), list.end(), mi(m)), list.end());
}

TEST(Enumerate, OrderZeroIsEmptyIndex) {
  auto list = enumerate_multi_indices(0);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].order(), 0u);
  EXPECT_EQ(weight_sum(list[0]), 0u);
  EXPECT_EQ(fdb_coefficient(list[0]), 1);
}

TEST(Enumerate, RejectsOrderAboveLimit) {
  EXPECT_THROW(enumerate_multi_indices(65), BoundsError);
  EXPECT_THROW(enumerate_multi_indices(9, 8), BoundsError);
  EXPECT_NO_THROW(enumerate_multi_indices(8, 8));
}

TEST(Enumerate, StrictlyDescendingAndComplete) {
  for (unsigned k = 1; k <= 12; ++k) {
    auto list = enumerate_multi_indices(k);
    for (std::size_t i = 1; i < list.size(); ++i) EXPECT_GT(list[i - 1], list[i]) << "k=" << k;
    auto brute = brute_force(k);
    EXPECT_EQ(list.size(), brute.size()) << "k=" << k;
  }
}

TEST(Enumerate, CountsArePartitionNumbers) {
  auto p = partition_numbers(30);
  for (unsigned k = 1; k <= 30; ++k) {
    std::size_t n = 0;
    for_each_multi_index(k, [&](const MultiIndex&) { ++n; });
    EXPECT_EQ(Integer(static_cast<unsigned long>(n)), p[k]) << "k=" << k;
  }
  EXPECT_EQ(p[30], 5604);
}

TEST(Enumerate, Deterministic) {
  EXPECT_EQ(enumerate_multi_indices(14), enumerate_multi_indices(14));
}

TEST(MultiIndexType, RejectsWrongWeight) {
  EXPECT_THROW(mi({1, 1}), ParameterError);
  EXPECT_NO_THROW(mi({1, 1, 0}));
  EXPECT_EQ(mi({1, 1, 0}).to_string(), "1,1,0");
  EXPECT_EQ(mi({1, 1, 0}).multiplicity(2), 1u);
}

TEST(WeightSum, SmallCases) {
  EXPECT_EQ(weight_sum(mi({1})), 1u);
  EXPECT_EQ(weight_sum(mi({2, 0})), 2u);
  EXPECT_EQ(weight_sum(mi({0, 1})), 1u);
}

TEST(FdbCoefficient, OrderThree) {
  EXPECT_EQ(fdb_coefficient(mi({3, 0, 0})), 1);
  EXPECT_EQ(fdb_coefficient(mi({1, 1, 0})), 3);
  EXPECT_EQ(fdb_coefficient(mi({0, 0, 1})), 1);
}

TEST(FdbCoefficient, SumIsBellNumber) {
  // Bell numbers from the Bell triangle.
  std::vector<Integer> row{1}, bell{1};
  for (unsigned n = 1; n <= 15; ++n) {
    std::vector<Integer> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = next;
    bell.push_back(row.front());
  }
  EXPECT_EQ(bell[15], Integer("1382958545"));
  for (unsigned k = 1; k <= 15; ++k) {
    Integer s = 0;
    for (const auto& e : coefficient_table(k)->entries) s += e.coefficient;
    EXPECT_EQ(s, bell[k]) << "k=" << k;
  }
}

TEST(CoefficientTable, LookupAndCache) {
  auto a = coefficient_table(6), b = coefficient_table(6);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(a->coefficient(mi({0, 3, 0, 0, 0, 0})), 15);  // 6!/(3! 2!^3)
  EXPECT_THROW(a->coefficient(mi({1, 0})), ParameterError);
}

TEST(Recurrence, HoldsUpToTwelve) {
  for (unsigned k = 1; k <= 12; ++k) EXPECT_TRUE(coefficient_recurrence_check(k)) << "k=" << k;
}

TEST(Recurrence, OrderElevenCoversSeventySevenIndices) {
  EXPECT_EQ(coefficient_table(12)->entries.size(), 77u);
  EXPECT_TRUE(coefficient_recurrence_check(11));
}

TEST(Recurrence, RejectsOutOfRange) {
  EXPECT_THROW(coefficient_recurrence_check(0), BoundsError);
  EXPECT_THROW(coefficient_recurrence_check(64), BoundsError);
}
