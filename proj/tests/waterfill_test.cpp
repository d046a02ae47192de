#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "jamgame/waterfill.hpp"
#include "test_oracles.hpp"

namespace jamgame {
namespace {

double log_objective(const std::vector<double>& floors, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < floors.size(); ++k) s += std::log(floors[k] + x[k]);
  return s;
}

testing::GridOptimum grid_waterfill(const std::vector<double>& floors, double budget, std::size_t n) {
  return testing::grid_argmax(floors.size(), n, budget,
                              [&](const std::vector<double>& x) { return log_objective(floors, x); });
}

TEST(WaterFill, SymmetricSplit) {
  auto s = water_fill({1.0, 1.0}, 1.0);
  EXPECT_DOUBLE_EQ(s.level, 1.5);
  EXPECT_DOUBLE_EQ(s.fills[0], 0.5);
  EXPECT_DOUBLE_EQ(s.fills[1], 0.5);
  EXPECT_EQ(s.active, (std::vector<std::size_t>{0, 1}));
}

TEST(WaterFill, OneChannelActive) {
  // Oracle: grid search over the simplex, step 1e-3.
  auto oracle = grid_waterfill({1, 3}, 1.0, 1000);
  EXPECT_NEAR(oracle.point[0], 1.0, 1e-12);
  EXPECT_NEAR(oracle.point[1], 0.0, 1e-12);

  auto s = water_fill({1.0, 3.0}, 1.0);
  EXPECT_DOUBLE_EQ(s.level, 2.0);
  EXPECT_DOUBLE_EQ(s.fills[0], 1.0);
  EXPECT_DOUBLE_EQ(s.fills[1], 0.0);
  EXPECT_EQ(s.active, (std::vector<std::size_t>{0}));
}

TEST(WaterFill, BothActive) {
  auto oracle = grid_waterfill({2, 5}, 10.0, 1000);
  EXPECT_NEAR(oracle.point[0], 6.5, 1e-9);
  EXPECT_NEAR(oracle.point[1], 3.5, 1e-9);

  auto s = water_fill({2.0, 5.0}, 10.0);
  EXPECT_DOUBLE_EQ(s.level, 8.5);
  EXPECT_DOUBLE_EQ(s.fills[0], 6.5);
  EXPECT_DOUBLE_EQ(s.fills[1], 3.5);
}

TEST(WaterFill, ZeroBudget) {
  auto s = water_fill({1.0, 1.0}, 0.0);
  EXPECT_EQ(s.level, 1.0);
  EXPECT_EQ(s.fills, (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(s.active.empty());

  EXPECT_EQ(water_fill({4.0, 2.0, 3.0}, 0.0).level, 2.0);
}

TEST(WaterFill, TieAtLevelIsInactive) {
  // level reaches exactly 3, the second floor
  auto s = water_fill({1.0, 3.0}, 2.0);
  EXPECT_EQ(s.level, 3.0);
  EXPECT_EQ(s.fills[1], 0.0);
  EXPECT_EQ(s.active, (std::vector<std::size_t>{0}));
}

TEST(WaterFill, Errors) {
  EXPECT_THROW(water_fill(std::vector<double>{}, 1.0), std::invalid_argument);
  EXPECT_THROW(water_fill({1.0, NAN}, 1.0), std::invalid_argument);
  EXPECT_THROW(water_fill({1.0, INFINITY}, 1.0), std::invalid_argument);
  EXPECT_THROW(water_fill({1.0}, INFINITY), std::invalid_argument);
  EXPECT_THROW(water_fill({1.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(water_fill({-1.0}, 1.0), std::invalid_argument);
}

TEST(WaterFill, AgreesWithBisection) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> f(0.0, 10.0), b(0.0, 20.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> floors(1 + t % 7);
    for (auto& x : floors) x = f(rng);
    double budget = b(rng);
    auto s = water_fill(floors, budget);
    EXPECT_NEAR(s.level, detail::water_level_bisect(floors, budget), 1e-10);
  }
}

TEST(LevelForFills, Examples) {
  std::vector<double> f1{1, 3}, x1{1, 0};
  auto a = level_for_fills(f1, x1);
  ASSERT_TRUE(a.level);
  EXPECT_EQ(*a.level, 2.0);
  EXPECT_TRUE(a.consistent);

  std::vector<double> f2{1, 1}, x2{0.5, 0.6};
  auto b = level_for_fills(f2, x2);
  EXPECT_FALSE(b.consistent);
  EXPECT_NE(b.detail.find("disagree"), std::string::npos);

  std::vector<double> f3{2, 5}, x3{6.5, 3.5};
  auto c = level_for_fills(f3, x3);
  ASSERT_TRUE(c.level);
  EXPECT_EQ(*c.level, 8.5);
  EXPECT_TRUE(c.consistent);
}

TEST(LevelForFills, NoActiveChannelAndErrors) {
  std::vector<double> f{1, 2}, x{0, 0};
  auto r = level_for_fills(f, x);
  EXPECT_FALSE(r.level);
  EXPECT_EQ(r.detail, "no active channel");

  std::vector<double> shorter{1};
  EXPECT_THROW(level_for_fills(f, shorter), std::invalid_argument);

  // inactive channel sitting below the level
  std::vector<double> f4{1, 1.2}, x4{1, 0};
  EXPECT_FALSE(level_for_fills(f4, x4).consistent);
}

class WaterFillProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{99};
  std::vector<double> random_floors(std::size_t m) {
    std::uniform_real_distribution<double> d(0.0, 10.0);
    std::vector<double> f(m);
    for (auto& x : f) x = d(rng);
    return f;
  }
  double random_budget() { return std::uniform_real_distribution<double>(0.01, 30.0)(rng); }
};

TEST_F(WaterFillProperties, OutputPassesInverseCheckAndSumsToBudget) {
  for (int t = 0; t < 1000; ++t) {
    auto floors = random_floors(1 + t % 8);
    double budget = random_budget();
    auto s = water_fill(floors, budget);
    double sum = std::accumulate(s.fills.begin(), s.fills.end(), 0.0);
    EXPECT_LE(std::abs(sum - budget), kSolveTol * std::max(1.0, budget));
    auto chk = level_for_fills(floors, s.fills);
    EXPECT_TRUE(chk.consistent) << chk.detail;
    ASSERT_TRUE(chk.level);
    EXPECT_NEAR(*chk.level, s.level, kSolveTol * std::max(1.0, s.level));
    for (std::size_t k = 0; k < floors.size(); ++k) {
      EXPECT_GE(s.fills[k], 0.0);
      EXPECT_EQ(s.fills[k] > 0.0, floors[k] < s.level);
    }
  }
}

TEST_F(WaterFillProperties, MonotoneInBudget) {
  for (int t = 0; t < 300; ++t) {
    auto floors = random_floors(1 + t % 6);
    double b1 = random_budget();
    double b2 = b1 + random_budget();
    auto s1 = water_fill(floors, b1);
    auto s2 = water_fill(floors, b2);
    EXPECT_GT(s2.level, s1.level);
    for (std::size_t k = 0; k < floors.size(); ++k) EXPECT_GE(s2.fills[k], s1.fills[k]);
  }
}

TEST_F(WaterFillProperties, PermutationEquivariant) {
  for (int t = 0; t < 300; ++t) {
    auto floors = random_floors(2 + t % 6);
    double budget = random_budget();
    std::vector<std::size_t> perm(floors.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> permuted(floors.size());
    for (std::size_t k = 0; k < floors.size(); ++k) permuted[k] = floors[perm[k]];
    auto s = water_fill(floors, budget);
    auto sp = water_fill(permuted, budget);
    EXPECT_NEAR(sp.level, s.level, 1e-12 * std::max(1.0, s.level));
    for (std::size_t k = 0; k < floors.size(); ++k) EXPECT_NEAR(sp.fills[k], s.fills[perm[k]], 1e-11);
  }
}

TEST_F(WaterFillProperties, ChannelAboveLevelChangesNothing) {
  for (int t = 0; t < 300; ++t) {
    auto floors = random_floors(1 + t % 6);
    double budget = random_budget();
    auto s = water_fill(floors, budget);
    auto extended = floors;
    extended.push_back(s.level + std::uniform_real_distribution<double>(0.0, 5.0)(rng));
    auto se = water_fill(extended, budget);
    EXPECT_NEAR(se.level, s.level, 1e-12 * std::max(1.0, s.level));
    EXPECT_EQ(se.fills.back(), 0.0);
    for (std::size_t k = 0; k < floors.size(); ++k) EXPECT_NEAR(se.fills[k], s.fills[k], 1e-12);
  }
}

TEST_F(WaterFillProperties, MatchesGridOracleOnSmallInstances) {
  // Grid step budget/n bounds how far the grid optimum can sit from the
  // true one in objective value; compare objective values.
  const std::size_t n = 200;
  for (int t = 0; t < 40; ++t) {
    std::size_t m = 2 + t % 3;
    auto floors = random_floors(m);
    for (auto& f : floors) f += 0.5;  // keep the log well away from zero
    double budget = random_budget();
    auto s = water_fill(floors, budget);
    auto oracle = grid_waterfill(floors, budget, n);
    double ours = log_objective(floors, s.fills);
    EXPECT_GE(ours, oracle.value - 1e-12);
    // Lipschitz bound of the objective: each coordinate moves at most one step
    double step = budget / static_cast<double>(n);
    double lip = 0.0;
    for (double f : floors) lip += 1.0 / f;
    EXPECT_LE(ours - oracle.value, lip * step);
  }
}

}  // namespace
}  // namespace jamgame
