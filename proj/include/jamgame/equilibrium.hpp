#pragma once

// The Nash equilibrium of the jamming game in closed form.
//
// At equilibrium the jammer waterfills against the noise alone, reaching a
// level w, and the transmitter waterfills against noise plus jamming,
// i.e. against floors max(N_k, w), reaching a level v > w. The jammer's
// budget multiplier is then u = a_J (v - w) / (2 v w), the inverse of
// w = v a_J / (a_J + 2 u v). Channels split into three regimes:
//
//   N_k >= v       Unused     nobody transmits
//   w < N_k < v    TxOnly     jamming would be wasted
//   N_k <= w       Contested  a_T T_k + a_J J_k + N_k = v

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamgame/best_response.hpp"
#include "jamgame/game.hpp"
#include "jamgame/saddle.hpp"
#include "jamgame/waterfill.hpp"

namespace jamgame {

/// w = v a_J / (2 u v + a_J)
inline double jammer_threshold(double v, double u, double alpha_j) { return v * alpha_j / (2.0 * u * v + alpha_j); }

/// u = a_J (v - w) / (2 v w)
inline double multiplier_from_levels(double v, double w, double alpha_j) { return alpha_j * (v - w) / (2.0 * v * w); }

inline std::vector<Regime> classify_by_levels(std::span<const double> noise, double v, double w) {
  std::vector<Regime> out(noise.size());
  for (std::size_t k = 0; k < noise.size(); ++k) {
    if (noise[k] >= v) out[k] = Regime::Unused;
    else if (noise[k] <= w) out[k] = Regime::Contested;
    else out[k] = Regime::TxOnly;
  }
  return out;
}

inline std::vector<Regime> classify_regimes(const GameParams& p, double v, double u) {
  if (!(v > 0.0)) throw std::invalid_argument("classify_regimes: v must be positive");
  if (!(u > 0.0)) throw std::invalid_argument("classify_regimes: u must be positive");
  const auto& ch = p.channels();
  return classify_by_levels(ch.noise(), v, jammer_threshold(v, u, ch.alpha_j()));
}

inline NashSolution solve_nash(const GameParams& p) {
  const auto& ch = p.channels();
  const std::size_t m = ch.size();
  NashSolution s;

  auto jam_wf = water_fill(ch.noise(), ch.alpha_j() * p.j_budget());
  s.w = jam_wf.level;
  assert(!jam_wf.active.empty());
  s.jam.budget = p.j_budget();
  s.jam.powers.resize(m);
  for (std::size_t k = 0; k < m; ++k) s.jam.powers[k] = jam_wf.fills[k] / ch.alpha_j();

  std::vector<double> floors(m);
  for (std::size_t k = 0; k < m; ++k) floors[k] = std::max(ch.noise(k), s.w);
  auto tx_wf = water_fill(floors, ch.alpha_t() * p.t_budget());
  s.v = tx_wf.level;
  s.tx.budget = p.t_budget();
  s.tx.powers.resize(m);
  for (std::size_t k = 0; k < m; ++k) s.tx.powers[k] = tx_wf.fills[k] / ch.alpha_t();

  if (!(s.v > s.w)) throw std::logic_error("solve_nash: transmitter level does not exceed jammer level");
  s.u = multiplier_from_levels(s.v, s.w, ch.alpha_j());
  s.regimes = classify_by_levels(ch.noise(), s.v, s.w);
  s.value = utility(p, s.tx, s.jam);
  return s;
}

struct RegimeIssue {
  std::size_t channel;
  std::string what;
};

/// Checks every label's invariant. Tolerances are scaled by max(1, v).
inline std::vector<RegimeIssue> check_regimes(const GameParams& p, const NashSolution& s, double tol) {
  const auto& ch = p.channels();
  std::vector<RegimeIssue> issues;
  if (s.regimes.size() != ch.size()) {
    issues.push_back({0, "regime vector has wrong length"});
    return issues;
  }
  const double eps = tol * std::max(1.0, std::abs(s.v));
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const double tx = ch.alpha_t() * s.tx[k];
    const double jam = ch.alpha_j() * s.jam[k];
    switch (s.regimes[k]) {
      case Regime::Unused:
        if (ch.noise(k) < s.v - eps) issues.push_back({k, "Unused but N_k < v"});
        if (tx > eps || jam > eps) issues.push_back({k, "Unused channel carries power"});
        break;
      case Regime::TxOnly:
        if (!(ch.noise(k) < s.v + eps) || !(ch.noise(k) > s.w - eps)) issues.push_back({k, "TxOnly but N_k outside (w, v)"});
        if (!(tx > 0.0)) issues.push_back({k, "TxOnly channel has no transmit power"});
        if (jam > eps) issues.push_back({k, "TxOnly channel is jammed"});
        break;
      case Regime::Contested:
        if (ch.noise(k) > s.w + eps) issues.push_back({k, "Contested but N_k > w"});
        if (std::abs(tx + jam + ch.noise(k) - s.v) > eps) issues.push_back({k, "Contested channel off the water level"});
        break;
    }
  }
  return issues;
}

struct NashReport {
  double tx_fixed_point = 0.0;   // |tx - tx_BR(jam)|_inf
  double jam_fixed_point = 0.0;  // |jam - jam_BR(tx)|_inf
  JammerKktState kkt;            // at (jam, u)
  double threshold_residual = 0.0;  // |v a_J / (2uv + a_J) - w|
  double value_residual = 0.0;      // |value - utility(tx, jam)|
  std::vector<RegimeIssue> regime_issues;
  SaddleReport saddle;
  double tol = kOptTol;

  bool fixed_point_ok() const { return tx_fixed_point <= tol && jam_fixed_point <= tol; }
  bool kkt_ok() const { return kkt.max_residual() <= tol; }
  bool pass() const {
    return fixed_point_ok() && kkt_ok() && threshold_residual <= tol && value_residual <= tol &&
           regime_issues.empty() && saddle.pass();
  }
};

struct VerifyOptions {
  std::size_t saddle_trials = 1000;
  std::uint64_t seed = 1;
  double tol = kOptTol;
};

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline NashReport verify_nash(const GameParams& p, const NashSolution& s, const VerifyOptions& opt = {}) {
  require_tx(p, s.tx);
  require_jam(p, s.jam);
  NashReport r;
  r.tol = opt.tol;
  r.tx_fixed_point = sup_distance(s.tx.powers, tx_best_response(p, s.jam).tx.powers);
  r.jam_fixed_point = sup_distance(s.jam.powers, jam_best_response(p, s.tx).jam.powers);
  r.kkt = jammer_kkt(p, s.tx, s.jam, s.u);
  r.threshold_residual = std::abs(jammer_threshold(s.v, s.u, p.channels().alpha_j()) - s.w);
  r.value_residual = std::abs(s.value - utility(p, s.tx, s.jam));
  r.regime_issues = check_regimes(p, s, opt.tol);
  r.saddle = saddle_probe(p, s, opt.saddle_trials, opt.seed, opt.tol);
  return r;
}

}  // namespace jamgame
