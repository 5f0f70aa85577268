#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "intertwine/combinatorics.hpp"
#include "intertwine/errors.hpp"

using namespace intertwine;

TEST(SetPartitions, BellNumbers) {
  const std::vector<std::size_t> bell{1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(set_partitions(n).size(), bell[n - 1]) << n;
}

TEST(SetPartitions, BlocksCoverWithoutDuplicates) {
  std::set<std::vector<std::vector<int>>> seen;
  for (const auto& sigma : set_partitions(5)) {
    auto blocks = sigma.blocks();
    std::vector<int> all;
    for (const auto& b : blocks) {
      EXPECT_FALSE(b.empty());
      all.insert(all.end(), b.begin(), b.end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, (std::vector<int>{0, 1, 2, 3, 4}));
    for (std::size_t i = 1; i < blocks.size(); ++i) EXPECT_LT(blocks[i - 1][0], blocks[i][0]);
    EXPECT_TRUE(seen.insert(blocks).second);
  }
}

TEST(SetPartitions, CapacityBounds) {
  EXPECT_THROW(set_partitions(0), CapacityError);
  EXPECT_THROW(set_partitions(13), CapacityError);
}

TEST(Compositions, Counts) {
  EXPECT_EQ(compositions(1), (std::vector<Composition>{{1}}));
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(compositions(n).size(), std::size_t{1} << (n - 1));
  for (const auto& c : compositions(6)) {
    int s = 0;
    for (int part : c) {
      EXPECT_GE(part, 1);
      s += part;
    }
    EXPECT_EQ(s, 6);
  }
  EXPECT_THROW(compositions(13), CapacityError);
}

TEST(Factorials, RisingAndFalling) {
  EXPECT_EQ(rising(Rational(3), 0), Rational(1));
  EXPECT_EQ(falling(Rational(3), 0), Rational(1));
  EXPECT_EQ(rising(Rational(1), 3), Rational(6));
  EXPECT_EQ(falling(Rational(5), 2), Rational(20));
  EXPECT_EQ(falling(Rational(1), 2), Rational(0));
  EXPECT_EQ(rising(Rational(1, 2), 2), Rational(3, 4));
  EXPECT_DOUBLE_EQ(rising(-2.0, 3), 0.0);
  // (a)^{(k)} = (-1)^k (-a)_k.
  for (int k = 0; k < 7; ++k) {
    const Rational a(7, 3);
    Rational sign = (k % 2 == 0) ? 1 : -1;
    EXPECT_EQ(rising(a, k), sign * falling(Rational(-a), k));
  }
}

TEST(SplitRate, SmallValues) {
  // (theta/2) B(i, j): B(1,1) = 1, B(2,1) = 1/2, B(2,2) = 1/6.
  EXPECT_EQ(howitt_warren_rate_exact(1, 1, 1), Rational(1, 2));
  EXPECT_EQ(howitt_warren_rate_exact(2, 1, 1), Rational(1, 4));
  EXPECT_EQ(howitt_warren_rate_exact(2, 2, 1), Rational(1, 12));
  EXPECT_NEAR(howitt_warren_rate(2, 1, 1.0), 0.25, 1e-15);
}

TEST(SplitRate, Consistency) {
  for (const Rational theta : {Rational(1), Rational(3, 2), Rational(1, 7)}) {
    for (int i = 1; i <= 6; ++i) {
      for (int j = 1; j <= 6; ++j) {
        EXPECT_EQ(howitt_warren_rate_exact(i + 1, j, theta) + howitt_warren_rate_exact(i, j + 1, theta),
                  howitt_warren_rate_exact(i, j, theta));
        EXPECT_EQ(howitt_warren_rate_exact(i, j, theta), howitt_warren_rate_exact(j, i, theta));
      }
    }
  }
}

TEST(SplitRate, MatchesBetaIntegralNumerically) {
  // (theta/2) * int_0^1 y^{i-1} (1-y)^{j-1} dy by midpoint rule.
  const int steps = 200000;
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      double s = 0.0;
      for (int q = 0; q < steps; ++q) {
        const double y = (q + 0.5) / steps;
        s += std::pow(y, i - 1) * std::pow(1.0 - y, j - 1);
      }
      EXPECT_NEAR(howitt_warren_rate(i, j, 2.0), s / steps, 1e-9);
    }
  }
}

TEST(SplitRate, RejectsBadArguments) {
  EXPECT_THROW(howitt_warren_rate(0, 1, 1.0), InvalidInput);
  EXPECT_THROW(howitt_warren_rate(1, 1, 0.0), InvalidInput);
}

TEST(BetaPlus, Values) {
  EXPECT_EQ(beta_plus_exact(1), Rational(0));
  EXPECT_EQ(beta_plus_exact(2), Rational(1));
  EXPECT_EQ(beta_plus_exact(3), Rational(3, 2));
  EXPECT_EQ(beta_plus_exact(4), Rational(11, 6));
}

TEST(Binomial, Exact) {
  EXPECT_EQ(binomial_exact(6, 3), Rational(20));
  EXPECT_EQ(factorial_exact(10), Rational(3628800));
  EXPECT_EQ(factorial_u64(20), 2432902008176640000ull);
}
