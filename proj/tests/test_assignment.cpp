#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "semproj/assignment.hpp"

using semproj::solve_assignment;

namespace {

// Cheapest cost over all n! permutations, and the lexicographically first
// permutation reaching it within `tol`.
std::pair<long double, std::vector<std::size_t>> enumerate(std::size_t n, const std::vector<double>& c,
                                                           long double tol = 1e-9L) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long double best = INFINITY;
  std::vector<std::size_t> arg;
  do {
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += c[i * n + perm[i]];
    if (s < best - tol) best = s, arg = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, arg};
}

}  // namespace

TEST(Assignment, Empty) {
  auto a = solve_assignment(0, {});
  EXPECT_TRUE(a.row_to_col.empty());
  EXPECT_EQ(a.cost, 0);
}

TEST(Assignment, Diagonal) {
  std::vector<double> c = {0, 5, 5, 0};
  auto a = solve_assignment(2, c);
  EXPECT_EQ(a.row_to_col, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(a.cost, 0);
}

TEST(Assignment, AntiDiagonal) {
  std::vector<double> c = {1, 0, 0, 1};
  auto a = solve_assignment(2, c);
  EXPECT_EQ(a.row_to_col, (std::vector<std::size_t>{1, 0}));
}

TEST(Assignment, ClassicThreeByThree) {
  std::vector<double> c = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  auto a = solve_assignment(3, c);
  EXPECT_EQ(a.row_to_col, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(static_cast<double>(a.cost), 5.0);
}

TEST(Assignment, AllTiesGiveIdentity) {
  std::vector<double> c(25, 3.0);
  auto a = solve_assignment(5, c);
  EXPECT_EQ(a.row_to_col, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Assignment, RejectsBadInput) {
  std::vector<double> c = {0, 1, 2};
  EXPECT_THROW(solve_assignment(2, c), semproj::IntegrityError);
  std::vector<double> d = {0, NAN, 1, 1};
  EXPECT_THROW(solve_assignment(2, d), semproj::IntegrityError);
}

TEST(Assignment, MatchesEnumerationOnRandomInstances) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 1 + rng() % 6;
    std::vector<double> c(n * n);
    for (auto& x : c) x = u(rng);
    auto a = solve_assignment(n, c);
    auto [best, arg] = enumerate(n, c);
    ASSERT_NEAR(static_cast<double>(a.cost), static_cast<double>(best), 1e-9);
    ASSERT_EQ(a.row_to_col, arg);
  }
}

TEST(Assignment, LexicographicTieBreakOnIntegerCosts) {
  // Small integer costs produce many exact ties.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 1 + rng() % 6;
    std::vector<double> c(n * n);
    for (auto& x : c) x = static_cast<double>(rng() % 3);
    auto a = solve_assignment(n, c);
    auto [best, arg] = enumerate(n, c, 0.5L);
    ASSERT_EQ(a.cost, best);
    ASSERT_EQ(a.row_to_col, arg);
  }
}

TEST(Assignment, ResultIsPermutation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const std::size_t n = 60;
  std::vector<double> c(n * n);
  for (auto& x : c) x = u(rng);
  auto a = solve_assignment(n, c);
  auto cols = a.row_to_col;
  std::sort(cols.begin(), cols.end());
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(cols[i], i);
}
