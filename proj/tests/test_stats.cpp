#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "metacomp/stats.hpp"

using namespace metacomp;

namespace {

// All-pairs count: a beats b when larger, ties count one half.
double brute_force_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

double sorted_middle(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

TEST(Quantile, Type7Reference) {
  // Reference values from numpy.percentile (linear interpolation).
  const std::vector<double> a{3, 1, 4, 1, 5, 9, 2};
  EXPECT_DOUBLE_EQ(quantile(a, 0.25), 1.5);
  EXPECT_DOUBLE_EQ(quantile(a, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(a, 0.75), 4.5);
  const std::vector<double> b{1.5, 2.5, 2.5, 7, 8, 11};
  EXPECT_DOUBLE_EQ(quantile(b, 0.25), 2.5);
  EXPECT_DOUBLE_EQ(quantile(b, 0.5), 4.75);
  EXPECT_DOUBLE_EQ(quantile(b, 0.75), 7.75);
  EXPECT_DOUBLE_EQ(summarize(b).iqr(), 5.25);
  EXPECT_DOUBLE_EQ(quantile({42.0}, 0.3), 42.0);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
}

TEST(Quantile, MedianIsTheSortedMiddle) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> xs(1 + gen() % 25);
    for (auto& x : xs) x = double(gen() % 40) / 4.0;
    EXPECT_EQ(median(xs), sorted_middle(xs));
  }
}

TEST(MannWhitney, UEqualsAllPairsCount) {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> a(1 + gen() % 20), b(1 + gen() % 20);
    const int spread = 1 + static_cast<int>(gen() % 30);  // small spreads force ties
    for (auto& x : a) x = double(gen() % spread);
    for (auto& x : b) x = double(gen() % spread) + 0.5 * double(gen() % 2);
    const auto r = mann_whitney(a, b);
    EXPECT_EQ(r.u, brute_force_u(a, b));
    EXPECT_EQ(mann_whitney(b, a).u, double(a.size() * b.size()) - r.u);
    EXPECT_GE(r.p, 0.0);
    EXPECT_LE(r.p, 1.0);
  }
}

TEST(MannWhitney, ReferencePValues) {
  // Frozen from scipy.stats.mannwhitneyu(method="asymptotic", use_continuity=False).
  struct Case {
    std::vector<double> a, b;
    double u, p;
  };
  const std::vector<Case> cases{
      {std::vector<double>(10, 0.0), std::vector<double>(10, 1.0), 0.0, 1.3071845366763019e-05},
      {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}, 0.0, 0.009023438818080326},
      {{3, 1, 4, 1, 5, 9, 2}, {6, 5, 3, 5, 8, 9, 7, 9}, 10.5, 0.04099706113290011},
      {{1.5, 2.5, 2.5, 7, 8}, {2.5, 3, 3, 3, 9, 10}, 9.0, 0.2644553111495318},
  };
  for (const auto& c : cases) {
    const auto r = mann_whitney(c.a, c.b);
    EXPECT_EQ(r.u, c.u);
    EXPECT_NEAR(r.p, c.p, 1e-12 + 1e-9 * c.p);
  }
}

TEST(MannWhitney, SeparatedGroups) {
  const auto r = mann_whitney(std::vector<double>(10, 0.0), std::vector<double>(10, 1.0));
  EXPECT_EQ(r.u, 0.0);
  EXPECT_LT(r.p, 0.001);
  EXPECT_EQ(mann_whitney(std::vector<double>(10, 1.0), std::vector<double>(10, 0.0)).u, 100.0);
}

TEST(MannWhitney, IdenticalGroupsShowNoDifference) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(5 + gen() % 16);
    for (auto& x : a) x = double(gen() % 10);
    EXPECT_GE(mann_whitney(a, a).p, 0.99);
  }
  EXPECT_EQ(mann_whitney({4, 4, 4, 4, 4}, {4, 4, 4, 4, 4}).p, 1.0);
}

TEST(MannWhitney, AverageRanks) {
  EXPECT_EQ(average_ranks({10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_THROW(mann_whitney({}, {1.0}), std::invalid_argument);
}
