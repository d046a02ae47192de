#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jamgame/equilibrium.hpp"
#include "jamgame/oracle.hpp"
#include "test_oracles.hpp"

namespace jamgame {
namespace {

GameParams unit_game(std::vector<double> noise, double t, double j) {
  return GameParams(ChannelSet(std::move(noise), 1.0, 1.0), t, j);
}

// Independent oracle for the equilibrium value on two or three channels:
// brute-force min over a jammer grid of the transmitter's best rate, where
// the inner max is itself a grid search.
double nested_grid_value(const std::vector<double>& noise, double t, double j, std::size_t outer, std::size_t inner) {
  double best = INFINITY;
  testing::for_each_simplex_point(noise.size(), outer, j, [&](const std::vector<double>& jam) {
    auto in = testing::grid_argmax(noise.size(), inner, t, [&](const std::vector<double>& tx) {
      return testing::rate_by_hand(noise, 1, 1, tx, jam);
    });
    best = std::min(best, in.value);
  });
  return best;
}

TEST(SolveNash, SymmetricTwoChannels) {
  auto p = unit_game({1, 1}, 2, 1);
  auto s = solve_nash(p);
  EXPECT_NEAR(s.w, 1.5, 1e-15);
  EXPECT_NEAR(s.v, 2.5, 1e-15);
  EXPECT_NEAR(s.jam[0], 0.5, 1e-15);
  EXPECT_NEAR(s.jam[1], 0.5, 1e-15);
  EXPECT_NEAR(s.tx[0], 1.0, 1e-15);
  EXPECT_NEAR(s.tx[1], 1.0, 1e-15);
  EXPECT_NEAR(s.u, 1.0 / 7.5, 1e-15);
  EXPECT_NEAR(s.value, std::log(5.0 / 3.0), 1e-15);
  EXPECT_EQ(s.regimes, (std::vector<Regime>{Regime::Contested, Regime::Contested}));

  // oracle: nested grid minimax, exact grid points contain the saddle
  EXPECT_NEAR(nested_grid_value({1, 1}, 2, 1, 100, 200), std::log(5.0 / 3.0), 1e-12);
  // both best responses reproduce the equilibrium
  EXPECT_NEAR(jam_best_response(p, s.tx).jam[0], 0.5, 1e-9);
  EXPECT_NEAR(tx_best_response(p, s.jam).tx[0], 1.0, 1e-12);
}

TEST(SolveNash, ThreeRegimes) {
  auto p = unit_game({1, 3, 6}, 4, 1);
  auto s = solve_nash(p);
  EXPECT_NEAR(s.w, 2.0, 1e-15);
  EXPECT_NEAR(s.v, 4.5, 1e-15);
  EXPECT_EQ(s.jam.powers, (std::vector<double>{1, 0, 0}));
  EXPECT_NEAR(s.tx[0], 2.5, 1e-15);
  EXPECT_NEAR(s.tx[1], 1.5, 1e-15);
  EXPECT_EQ(s.tx[2], 0.0);
  EXPECT_NEAR(s.u, 2.5 / 18.0, 1e-15);
  EXPECT_NEAR(s.value, 0.5 * std::log(3.375), 1e-15);
  EXPECT_NEAR(s.value, 0.60819, 1e-5);
  EXPECT_EQ(s.regimes, (std::vector<Regime>{Regime::Contested, Regime::TxOnly, Regime::Unused}));
  EXPECT_NEAR(jammer_threshold(s.v, s.u, 1.0), 2.0, 1e-14);

  EXPECT_NEAR(nested_grid_value({1, 3, 6}, 4, 1, 20, 40), s.value, 1e-12);
  auto jb = jam_best_response(p, s.tx).jam;
  EXPECT_LE(sup_distance(jb.powers, s.jam.powers), 1e-9);
  auto tb = tx_best_response(p, s.jam).tx;
  EXPECT_LE(sup_distance(tb.powers, s.tx.powers), 1e-12);
}

TEST(SolveNash, SingleChannel) {
  auto p = unit_game({1}, 1, 1);
  auto s = solve_nash(p);
  EXPECT_EQ(s.tx[0], 1.0);
  EXPECT_EQ(s.jam[0], 1.0);
  EXPECT_EQ(s.w, 2.0);
  EXPECT_EQ(s.v, 3.0);
  EXPECT_NEAR(s.value, 0.5 * std::log(1.5), 1e-15);
}

TEST(ClassifyRegimes, Examples) {
  auto p = unit_game({1, 3, 6}, 4, 1);
  EXPECT_EQ(classify_regimes(p, 4.5, 2.5 / 18.0),
            (std::vector<Regime>{Regime::Contested, Regime::TxOnly, Regime::Unused}));
  // N_k == v is Unused, N_k == w is Contested
  std::vector<double> noise{2.0, 4.5};
  EXPECT_EQ(classify_by_levels(noise, 4.5, 2.0), (std::vector<Regime>{Regime::Contested, Regime::Unused}));
  EXPECT_THROW(classify_regimes(p, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(classify_regimes(p, 1.0, 0.0), std::invalid_argument);
}

TEST(SolveNash, NoiseEqualToJammerLevelIsContestedWithZeroJamming) {
  // jammer fills channel 1 up to 2 = N_2 exactly
  auto p = unit_game({1, 2, 9}, 3, 1);
  auto s = solve_nash(p);
  EXPECT_EQ(s.w, 2.0);
  EXPECT_EQ(s.jam[1], 0.0);
  EXPECT_EQ(s.regimes[1], Regime::Contested);
  EXPECT_TRUE(check_regimes(p, s, kSolveTol).empty());
}

TEST(VerifyNash, PassesOnSolverOutput) {
  for (auto p : {unit_game({1, 1}, 2, 1), unit_game({1, 3, 6}, 4, 1), unit_game({1}, 1, 1)}) {
    auto rep = verify_nash(p, solve_nash(p));
    EXPECT_TRUE(rep.pass());
    EXPECT_LE(rep.tx_fixed_point, kOptTol);
    EXPECT_LE(rep.jam_fixed_point, kOptTol);
    EXPECT_TRUE(rep.saddle.pass());
  }
}

TEST(VerifyNash, PerturbedJammerIsNotABestResponse) {
  auto p = unit_game({1, 1}, 2, 1);
  auto s = solve_nash(p);
  s.jam.powers = {0.6, 0.4};
  auto rep = verify_nash(p, s);
  EXPECT_GT(rep.jam_fixed_point, 0.0);
  EXPECT_FALSE(rep.pass());
}

TEST(VerifyNash, TransmitterDeviationOnThreeRegimeInstance) {
  auto p = unit_game({1, 3, 6}, 4, 1);
  auto s = solve_nash(p);
  // channel 1 carries jam 1, so its floor is 2: 1/2 ln(1 + 4/2)
  double dev = utility(p, {{4, 0, 0}, 4}, s.jam);
  EXPECT_NEAR(dev, 0.5 * std::log(3.0), 1e-15);
  EXPECT_LT(dev, s.value);
}

class EquilibriumProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{777};
  GameParams random_game(std::size_t m) {
    std::uniform_real_distribution<double> noise(0.5, 8.0), budget(0.5, 5.0), alpha(0.5, 2.0);
    std::vector<double> n(m);
    for (auto& x : n) x = noise(rng);
    return GameParams(ChannelSet(n, alpha(rng), alpha(rng)), budget(rng), budget(rng));
  }
};

TEST_F(EquilibriumProperties, JammerWaterfillsOnNoise) {
  for (int t = 0; t < 200; ++t) {
    auto p = random_game(1 + t % 6);
    auto s = solve_nash(p);
    const auto& ch = p.channels();
    auto wf = water_fill(ch.noise(), ch.alpha_j() * p.j_budget());
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_EQ(s.jam[k], wf.fills[k] / ch.alpha_j());
    auto br = jam_best_response(p, s.tx);
    EXPECT_LE(sup_distance(br.jam.powers, s.jam.powers), kOptTol);
  }
}

TEST_F(EquilibriumProperties, StructuralInvariants) {
  for (int t = 0; t < 200; ++t) {
    auto p = random_game(1 + t % 6);
    auto s = solve_nash(p);
    const auto& ch = p.channels();
    EXPECT_GT(s.v, s.w);
    EXPECT_GT(s.w, 0.0);
    EXPECT_GT(s.u, 0.0);
    EXPECT_NEAR(jammer_threshold(s.v, s.u, ch.alpha_j()), s.w, kSolveTol * std::max(1.0, s.w));
    EXPECT_NEAR(multiplier_from_levels(s.v, jammer_threshold(s.v, s.u, ch.alpha_j()), ch.alpha_j()), s.u,
                1e-12 * s.u);
    for (std::size_t k = 0; k < p.size(); ++k) {
      EXPECT_NEAR(ch.alpha_j() * s.jam[k], std::max(s.w - ch.noise(k), 0.0), 1e-15 * s.w);
      EXPECT_NEAR(ch.alpha_t() * s.tx[k], std::max(s.v - std::max(ch.noise(k), s.w), 0.0), 1e-12 * s.v);
      if (ch.noise(k) >= s.v) {
        EXPECT_EQ(s.tx[k], 0.0);
        EXPECT_EQ(s.jam[k], 0.0);
      }
    }
    EXPECT_TRUE(check_regimes(p, s, kSolveTol).empty());
    EXPECT_DOUBLE_EQ(s.value, utility(p, s.tx, s.jam));
  }
}

TEST_F(EquilibriumProperties, MutualBestResponse) {
  for (int t = 0; t < 100; ++t) {
    auto p = random_game(2 + t % 4);
    auto s = solve_nash(p);
    EXPECT_LE(sup_distance(tx_best_response(p, s.jam).tx.powers, s.tx.powers), 1e-9);
    EXPECT_LE(sup_distance(jam_best_response(p, s.tx).jam.powers, s.jam.powers), kOptTol);
  }
}

TEST(HighPowerLimit, BothPlayersSpreadUniformly) {
  const std::vector<double> noise{1, 3, 6};
  const double budget = 1e6;
  auto p = unit_game(noise, budget, budget);
  auto s = solve_nash(p);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE(std::abs(s.tx[k] - budget / 3), 1e-3 * budget / 3);
    EXPECT_LE(std::abs(s.jam[k] - budget / 3), 1e-3 * budget / 3);
    EXPECT_EQ(s.regimes[k], Regime::Contested);
  }
}

TEST(Uniqueness, DynamicsFromRandomStartsAgree) {
  for (auto p : {unit_game({1, 1}, 2, 1), unit_game({1, 3, 6}, 4, 1),
                 GameParams(ChannelSet({0.7, 2.2, 4.0, 1.1}, 1.3, 0.8), 3.0, 2.5)}) {
    auto probe = probe_uniqueness(p, 10, 11);
    EXPECT_TRUE(probe.all_converged);
    EXPECT_LE(probe.max_distance, kDynTol);
  }
}

}  // namespace
}  // namespace jamgame
