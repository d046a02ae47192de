#pragma once

// Equilibrium value types and the randomized saddle-point probe.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "jamgame/game.hpp"

namespace jamgame {

enum class Regime { Unused, TxOnly, Contested };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Unused: return "Unused";
    case Regime::TxOnly: return "TxOnly";
    case Regime::Contested: return "Contested";
  }
  return "?";
}

inline bool parse_regime(std::string_view s, Regime& out) {
  for (Regime r : {Regime::Unused, Regime::TxOnly, Regime::Contested}) {
    if (s == to_string(r)) {
      out = r;
      return true;
    }
  }
  return false;
}

struct NashSolution {
  Allocation tx;
  Allocation jam;
  double v = 0.0;  // transmitter water level
  double w = 0.0;  // jammer water level
  double u = 0.0;  // jammer budget multiplier
  std::vector<Regime> regimes;
  double value = 0.0;  // nats per channel use
};

/// Uniform sample from {x >= 0, sum x = budget} (flat Dirichlet).
template <class Rng>
Allocation sample_simplex(Rng& rng, std::size_t m, double budget) {
  std::exponential_distribution<double> expo(1.0);
  Allocation a;
  a.budget = budget;
  a.powers.resize(m);
  double s = 0.0;
  for (auto& x : a.powers) {
    x = expo(rng);
    s += x;
  }
  for (auto& x : a.powers) x = x / s * budget;
  return a;
}

struct SaddleReport {
  std::size_t trials = 0;
  // min over sampled jam' of utility(tx*, jam') - value; should be >= -eps
  double worst_jam_margin = std::numeric_limits<double>::infinity();
  // min over sampled tx' of value - utility(tx', jam*); should be >= -eps
  double worst_tx_margin = std::numeric_limits<double>::infinity();
  std::vector<Allocation> jam_violations;
  std::vector<Allocation> tx_violations;

  bool pass() const { return jam_violations.empty() && tx_violations.empty(); }
};

/// Samples `trials` uniform deviations per player and checks
/// utility(tx*, jam') >= value - eps and utility(tx', jam*) <= value + eps,
/// using the value stored in `sol`.
inline SaddleReport saddle_probe(const GameParams& p, const NashSolution& sol, std::size_t trials,
                                 std::uint64_t seed, double eps = 1e-6) {
  require_tx(p, sol.tx);
  require_jam(p, sol.jam);
  SaddleReport r;
  r.trials = trials;
  std::mt19937_64 rng(seed);
  const auto& ch = p.channels();
  for (std::size_t i = 0; i < trials; ++i) {
    Allocation jam_dev = sample_simplex(rng, p.size(), p.j_budget());
    Allocation tx_dev = sample_simplex(rng, p.size(), p.t_budget());
    double jm = utility_unchecked(ch, sol.tx.powers, jam_dev.powers) - sol.value;
    double tm = sol.value - utility_unchecked(ch, tx_dev.powers, sol.jam.powers);
    r.worst_jam_margin = std::min(r.worst_jam_margin, jm);
    r.worst_tx_margin = std::min(r.worst_tx_margin, tm);
    if (jm < -eps) r.jam_violations.push_back(std::move(jam_dev));
    if (tm < -eps) r.tx_violations.push_back(std::move(tx_dev));
  }
  return r;
}

}  // namespace jamgame
